#pragma once

#include <iosfwd>
#include <string>

#include "ttrace/tensor_train.hpp"

namespace ttrace {

/// Binary MPO container, used for CLI checkpoints.
///
/// Layout (all integers little-endian uint32, all floats little-endian
/// IEEE-754 binary64):
///   magic "TTOP" | version (=1) | L | d
///   then per core: dl | dr | dl*d*d*dr values as (real, imag) pairs in
///   (left bond, physical row, physical col, right bond) order, right bond
///   fastest.
void save_ttop(std::ostream& os, const TensorTrain<cd>& tt);
void save_ttop(std::ostream& os, const TensorTrain<double>& tt);
void save_ttop_file(const std::string& path, const TensorTrain<cd>& tt);
void save_ttop_file(const std::string& path, const TensorTrain<double>& tt);

/// Throws std::runtime_error on bad magic, version, or truncated data.
TensorTrain<cd> load_ttop(std::istream& is);
TensorTrain<cd> load_ttop_file(const std::string& path);

/// Real view of a loaded operator when every imaginary part is exactly zero.
bool is_real_valued(const TensorTrain<cd>& tt);
TensorTrain<double> real_part(const TensorTrain<cd>& tt);

}  // namespace ttrace
