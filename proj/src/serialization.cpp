#include "ttrace/serialization.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ttrace {

namespace {

constexpr char kMagic[4] = {'T', 'T', 'O', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("ttop: truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("ttop: truncated data");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_ttop(std::ostream& os, const TensorTrain<cd>& tt) {
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(tt.length()));
  put_u32(os, static_cast<std::uint32_t>(tt.phys_dim()));
  for (Index k = 0; k < tt.length(); ++k) {
    const auto& c = tt.core(k);
    put_u32(os, static_cast<std::uint32_t>(c.dl));
    put_u32(os, static_cast<std::uint32_t>(c.dr));
    for (const cd& v : c.data) {
      put_f64(os, v.real());
      put_f64(os, v.imag());
    }
  }
  if (!os) throw std::runtime_error("ttop: write failed");
}

void save_ttop(std::ostream& os, const TensorTrain<double>& tt) {
  save_ttop(os, to_complex(tt));
}

TensorTrain<cd> load_ttop(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("ttop: bad magic");
  const std::uint32_t version = get_u32(is);
  if (version != kVersion)
    throw std::runtime_error("ttop: unsupported version " + std::to_string(version));
  const std::uint32_t L = get_u32(is);
  const std::uint32_t d = get_u32(is);
  if (L < 1 || d < 1 || L > 1u << 20 || d > 1u << 10)
    throw std::runtime_error("ttop: implausible header");
  std::vector<Core<cd>> cores;
  cores.reserve(L);
  for (std::uint32_t k = 0; k < L; ++k) {
    const std::uint32_t dl = get_u32(is);
    const std::uint32_t dr = get_u32(is);
    if (dl < 1 || dr < 1 || dl > 1u << 20 || dr > 1u << 20)
      throw std::runtime_error("ttop: implausible core shape");
    Core<cd> c(static_cast<Index>(dl), static_cast<Index>(dr), static_cast<int>(d));
    for (cd& v : c.data) {
      const double re = get_f64(is);
      const double im = get_f64(is);
      v = cd(re, im);
    }
    cores.push_back(std::move(c));
  }
  TensorTrain<cd> tt(std::move(cores));
  return tt;
}

void save_ttop_file(const std::string& path, const TensorTrain<cd>& tt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("ttop: cannot open " + path + " for writing");
  save_ttop(os, tt);
}

void save_ttop_file(const std::string& path, const TensorTrain<double>& tt) {
  save_ttop_file(path, to_complex(tt));
}

TensorTrain<cd> load_ttop_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("ttop: cannot open " + path);
  return load_ttop(is);
}

bool is_real_valued(const TensorTrain<cd>& tt) {
  for (Index k = 0; k < tt.length(); ++k)
    for (const cd& v : tt.core(k).data)
      if (v.imag() != 0.0) return false;
  return true;
}

TensorTrain<double> real_part(const TensorTrain<cd>& tt) {
  std::vector<Core<double>> cores;
  cores.reserve(static_cast<std::size_t>(tt.length()));
  for (Index k = 0; k < tt.length(); ++k) {
    const auto& src = tt.core(k);
    Core<double> c(src.dl, src.dr, src.d);
    for (std::size_t n = 0; n < src.data.size(); ++n) c.data[n] = src.data[n].real();
    cores.push_back(std::move(c));
  }
  return TensorTrain<double>(std::move(cores));
}

}  // namespace ttrace
