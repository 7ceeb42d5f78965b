#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "ttrace/serialization.hpp"

using namespace ttrace;

TEST_CASE("ttop round trip is bit exact") {
  std::mt19937 rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const Index L = 1 + rep % 5;
    auto X = test::random_tt<cd>(rng, L, 1 + rep % 4);
    std::stringstream buf;
    save_ttop(buf, X);
    const auto Y = load_ttop(buf);
    REQUIRE(Y.length() == X.length());
    for (Index k = 0; k < L; ++k) {
      CHECK(Y.core(k).dl == X.core(k).dl);
      CHECK(Y.core(k).dr == X.core(k).dr);
      CHECK(Y.core(k).data == X.core(k).data);
    }
  }
}

TEST_CASE("real operators promote and demote cleanly") {
  std::mt19937 rng(23);
  auto X = test::random_tt<double>(rng, 4, 3);
  std::stringstream buf;
  save_ttop(buf, X);
  const auto Y = load_ttop(buf);
  CHECK(is_real_valued(Y));
  const auto Z = real_part(Y);
  for (Index k = 0; k < 4; ++k) CHECK(Z.core(k).data == X.core(k).data);
}

TEST_CASE("corrupt containers are rejected") {
  std::mt19937 rng(29);
  auto X = test::random_tt<cd>(rng, 3, 2);
  std::stringstream buf;
  save_ttop(buf, X);
  std::string bytes = buf.str();

  {
    std::string bad = bytes;
    bad[0] = 'Q';  // magic
    std::istringstream is(bad);
    CHECK_THROWS_WITH_AS(load_ttop(is), "ttop: bad magic", std::runtime_error);
  }
  {
    std::string bad = bytes;
    bad[4] = 9;  // version
    std::istringstream is(bad);
    CHECK_THROWS_AS(load_ttop(is), std::runtime_error);
  }
  {
    std::string bad = bytes.substr(0, bytes.size() / 2);  // truncated
    std::istringstream is(bad);
    CHECK_THROWS_AS(load_ttop(is), std::runtime_error);
  }
}
