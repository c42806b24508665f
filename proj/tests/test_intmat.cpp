#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sllift/intmat.hpp"
#include "sllift/lifting.hpp"

using namespace sllift;

namespace {

IntMatrix random_matrix(std::size_t r, std::size_t c, std::int64_t bound, std::mt19937_64& rng) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * bound + 1)) - bound;
  return m;
}

}  // namespace

TEST_CASE("shape checks") {
  CHECK_THROWS_AS(IntMatrix(0, 2), Error);
  CHECK_THROWS_AS(det(IntMatrix(2, 3)), Error);
  CHECK_THROWS_AS(maximal_minors(IntMatrix(2, 2)), Error);
}

TEST_CASE("determinant") {
  CHECK(det(IntMatrix::identity(3)) == 1);
  CHECK(det(IntMatrix{{3, 5}, {1, 2}}) == 1);
  CHECK(det(IntMatrix{{2, 0}, {0, 2}}) == 4);
  CHECK(det(IntMatrix{{0, 1}, {1, 0}}) == -1);
  CHECK(det(IntMatrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}) == 0);
  CHECK(det(IntMatrix{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}) == 4);
}

TEST_CASE("determinant matches cofactor expansion") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 2 + rng() % 4;
    const IntMatrix m = random_matrix(n, n, 50, rng);
    Int expansion = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const Int minor = det(m.without_row_col(0, j));
      expansion += (j % 2 == 0 ? 1 : -1) * m(0, j) * minor;
    }
    REQUIRE(det(m) == expansion);
    REQUIRE(m * adjugate(m) == [&] {
      IntMatrix d(n, n);
      for (std::size_t k = 0; k < n; ++k) d(k, k) = det(m);
      return d;
    }());
  }
}

TEST_CASE("adjugate mod q") {
  CHECK(adjugate_mod(IntMatrix::identity(3), 7) == IntMatrix::identity(3));
  CHECK(adjugate_mod(IntMatrix{{0, -1}, {1, 0}}, 5) == IntMatrix{{0, 1}, {4, 0}});
  CHECK_THROWS_AS(adjugate_mod(IntMatrix{{2, 0}, {0, 1}}, 5), Error);

  std::mt19937_64 rng(35);
  for (int i = 0; i < 100; ++i) {
    const IntMatrix m = random_sl_mod(3, 35, rng);
    const IntMatrix inv = adjugate_mod(m, 35);
    REQUIRE(congruent_mod(m * inv, IntMatrix::identity(3), 35));
    REQUIRE(congruent_mod(inv * m, IntMatrix::identity(3), 35));
  }
}

TEST_CASE("maximal minors") {
  CHECK(maximal_minors(IntMatrix{{1, 0, 0}, {0, 1, 0}}) == IntVector{0, 0, 1});
  CHECK(maximal_minors(IntMatrix{{3, 5}}) == IntVector{-5, 3});
  CHECK(maximal_minors(IntMatrix::identity(4).row_block(0, 3)) == IntVector{0, 0, 0, 1});
}

TEST_CASE("det(stack(B, v)) = <v, c>") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 2 + rng() % 4;
    const IntMatrix b = random_matrix(n - 1, n, 100, rng);
    const IntMatrix vm = random_matrix(1, n, 100, rng);
    const IntVector v = vm.row(0);
    REQUIRE(det(b.stacked(v)) == dot(v, maximal_minors(b)));
  }
}

TEST_CASE("solve mod q") {
  CHECK(solve_mod(IntMatrix::identity(3), IntVector{2, 3, 0}, 10) == IntVector{2, 3, 0});
  const IntMatrix a{{3, 5}, {1, 2}};
  CHECK(solve_mod(a, a.row(0), 7) == IntVector{1, 0});
  CHECK_THROWS_AS(solve_mod(IntMatrix{{2, 0}, {0, 1}}, IntVector{1, 1}, 4), Error);
}

TEST_CASE("solve mod q reconstructs and respects Cramer") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    const IntMatrix a = random_sl_mod(3, 12, rng);
    IntVector w(3);
    if (i % 2 == 0) {
      // w in the span of the first two rows: the last Cramer determinant vanishes.
      const Int s = static_cast<std::int64_t>(rng() % 12), t = static_cast<std::int64_t>(rng() % 12);
      for (std::size_t j = 0; j < 3; ++j) w[j] = mod_floor(s * a(0, j) + t * a(1, j), Int(12));
    } else {
      for (auto& x : w) x = static_cast<std::int64_t>(rng() % 12);
    }
    const IntVector alpha = solve_mod(a, w, 12);
    for (std::size_t j = 0; j < 3; ++j) {
      Int s = 0;
      for (std::size_t k = 0; k < 3; ++k) s += alpha[k] * a(k, j);
      REQUIRE(mod_floor(s - w[j], Int(12)) == 0);
    }
    IntMatrix top = a.row_block(0, 2).stacked(w);
    if (mod_floor(det(top), Int(12)) == 0) REQUIRE(alpha[2] == 0);
  }
}

TEST_CASE("size reduction") {
  CHECK(size_reduce(IntVector{0, 1}, IntMatrix{{1, 0}}) == IntVector{0, 1});
  CHECK(size_reduce(IntVector{7, 0}, IntMatrix{{1, 0}}) == IntVector{0, 0});
  CHECK(size_reduce(IntVector{100, 201}, IntMatrix{{1, 2}}) == IntVector{0, 1});
  CHECK_THROWS_AS(size_reduce(IntVector{1, 1, 1}, IntMatrix{{1, 2, 3}, {2, 4, 6}}), Error);
}

TEST_CASE("rounding is half up") {
  CHECK(round_nearest(5, 2) == 3);
  CHECK(round_nearest(-5, 2) == -2);
  CHECK(round_nearest(502, 5) == 100);
  CHECK(round_nearest(-7, 3) == -2);
}

TEST_CASE("norms") {
  const IntMatrix m{{1, -7}, {3, 2}};
  CHECK(max_norm(m) == 7);
  const NormReport r = norm_report(m);
  CHECK(r.max_norm == 7);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng() % 4;
    const IntMatrix a = random_matrix(n, n, 1000, rng);
    const NormReport nr = norm_report(a);
    const double mx = nr.max_norm.convert_to<double>();
    REQUIRE(mx <= nr.op_norm_estimate * (1 + 1e-6));
    REQUIRE(nr.op_norm_estimate <= static_cast<double>(n) * mx * (1 + 1e-6));
  }
}

TEST_CASE("modular helpers") {
  CHECK(mod_floor(Int(-3), Int(8)) == 5);
  CHECK(signed_lift(IntMatrix{{5, 4}, {3, 7}}, 8) == IntMatrix{{-3, 4}, {3, -1}});
  CHECK(reduce_mod(IntMatrix{{-3, 9}}, 8) == IntMatrix{{5, 1}});
  CHECK(IntMatrix{{1, 2}, {3, 4}}.to_string() == "1,2;3,4");
}
