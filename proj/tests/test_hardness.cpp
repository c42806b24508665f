#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "sllift/hardness.hpp"
#include "sllift/oracle.hpp"

using namespace sllift;

namespace {

// Every lift with max-norm <= cap: the diagonal congruence and the norm bound.
void check_all_lifts(const HardInstance& h, std::int64_t cap) {
  const std::int64_t q2 = h.witness.modulus;
  const std::int64_t alpha = h.witness.alpha.value();
  const std::int64_t nbeta = mul_mod(static_cast<std::int64_t>(h.n), h.witness.beta.value(), q2);
  const Int bound = h.lower_bound_ceil();
  std::size_t seen = 0;
  for_each_sl(EnumSpec::lifts_of(h.x, h.q, cap), [&](std::span<const std::int64_t> g) {
    __int128 s = static_cast<__int128>(alpha) * g[0];
    std::int64_t norm = 0;
    for (std::size_t i = 0; i < h.n; ++i) {
      if (i > 0) s += g[i * h.n + i];
      for (std::size_t j = 0; j < h.n; ++j) norm = std::max<std::int64_t>(norm, std::abs(g[i * h.n + j]));
    }
    REQUIRE(static_cast<std::int64_t>(((s % q2) + q2) % q2) == nbeta);
    REQUIRE(Int(norm) >= bound);
    ++seen;
    return true;
  });
  CHECK(seen > 0);
}

}  // namespace

TEST_CASE("find_large_root: roots of unity mod 15") {
  const RootWitness w = find_large_root(15, 2, 1, 0);
  CHECK(w.alpha.value() == 1);
  CHECK(w.beta.value() == 4);
  CHECK(w.abs_n_beta == 7);
  CHECK_FALSE(w.reached_target);
}

TEST_CASE("find_large_root maximizes over the whole budget") {
  // |2 beta| over alpha in [-17, 17]: alpha = -7 gives beta = 11 and 22.
  const RootWitness w = find_large_root(64, 2, 17, 0);
  CHECK(w.alpha.value() == 57);
  CHECK(w.beta.value() == 11);
  CHECK(w.abs_n_beta == 22);
  CHECK(w.abs_alpha == 7);
  // alpha = 17 alone is weaker.
  CHECK(make_witness(64, 2, 17, 9).abs_n_beta == 18);
}

TEST_CASE("find_large_root stops at the target") {
  const RootWitness w = find_large_root(64, 2, 17, 10);
  CHECK(w.reached_target);
  CHECK(w.alpha.value() == 57);
  CHECK(w.alpha_rank == 7);  // 1, -1, 3, -3, 5, -5, 7, -7 (even alpha skipped)
}

TEST_CASE("find_large_root degenerate n = 1") {
  const RootWitness w = find_large_root(101, 1, 1, 0);
  CHECK(w.degenerate);
  CHECK(w.abs_n_beta <= 1);
}

TEST_CASE("alpha order") {
  CHECK(alpha_candidates(3) == std::vector<std::int64_t>{1, -1, 2, -2, 3, -3});
}

TEST_CASE("witness validity across moduli") {
  for (std::int64_t q = 2; q <= 400; ++q)
    for (std::uint64_t n = 2; n <= 4; ++n) {
      const RootWitness w = find_large_root(q, n, 5, 0);
      REQUIRE(pow_mod(w.beta.value(), n, q) == w.alpha.value());
      REQUIRE(std::gcd(w.beta.value(), q) == 1);
      REQUIRE(w.abs_alpha == abs_value(w.alpha));
    }
}

TEST_CASE("small P factor roots") {
  const auto w = small_P_factor_root(15, 2, 2);
  REQUIRE(w.has_value());
  CHECK(w->beta.value() == 11);
  CHECK(w->abs_n_beta == 7);
  CHECK(w->alpha.value() == 1);
  CHECK(static_cast<double>(w->abs_n_beta) > std::sqrt(15.0) - 2);
  CHECK_FALSE(small_P_factor_root(7, 2, 2).has_value());
  CHECK_FALSE(small_P_factor_root(5, 3, 2).has_value());
  CHECK_FALSE(small_P_factor_root(1024, 2, 2).has_value());
}

TEST_CASE("small P factor bound holds") {
  for (std::int64_t q = 6; q <= 3000; ++q)
    for (std::uint64_t n = 2; n <= 3; ++n)
      if (const auto w = small_P_factor_root(q, n, 2)) {
        REQUIRE(pow_mod(w->beta.value(), n, q) == 1);
        REQUIRE(static_cast<double>(w->abs_n_beta) > std::sqrt(static_cast<double>(q)) - static_cast<double>(n));
      }
}

TEST_CASE("rational n-th power ratio") {
  CHECK(is_rational_nth_power_ratio(Int(8), Int(2), 2));
  CHECK_FALSE(is_rational_nth_power_ratio(Int(6), Int(2), 2));
  CHECK(is_rational_nth_power_ratio(Int(54), Int(2), 3));
}

TEST_CASE("small n-th powers") {
  const auto trivial = small_nth_powers(7, 3, 1);
  REQUIRE(trivial.size() == 1);
  CHECK(trivial[0].alpha_integer == 8);
  CHECK(trivial[0].beta.value() == 2);

  const auto pairs = small_nth_powers(101, 2, 2);
  REQUIRE(pairs.size() == 2);
  for (const auto& p : pairs) CHECK(pow_mod(p.beta.value(), 2, 101) == p.alpha.value());
  CHECK_FALSE(is_rational_nth_power_ratio(pairs[0].alpha_integer, pairs[1].alpha_integer, 2));

  const auto more = small_nth_powers(360, 3, 6);
  for (std::size_t i = 0; i < more.size(); ++i) {
    CHECK(pow_mod(more[i].beta.value(), 3, 360) == more[i].alpha.value());
    for (std::size_t j = 0; j < i; ++j)
      CHECK_FALSE(is_rational_nth_power_ratio(more[i].alpha_integer, more[j].alpha_integer, 3));
  }

  CHECK(small_nth_powers(2, 2, 1).size() == 1);
  try {
    small_nth_powers(8, 2, 5, SmallPowersOptions{3});
    FAIL("expected SieveExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SieveExhausted);
  }
}

TEST_CASE("hard instance q = 8") {
  const HardInstance h = hard_instance(8, 2, 17);
  CHECK(h.witness.modulus == 64);
  CHECK(h.witness.alpha.value() == 57);
  CHECK(h.witness.beta.value() == 11);
  CHECK(h.x == IntMatrix{{3, 0}, {0, 3}});
  CHECK(h.lower_bound_ceil() == 2);
  CHECK(mod_floor(det(h.x), Int(8)) == 1);
  check_all_lifts(h, 64);
}

TEST_CASE("the alpha = 17 witness obeys its congruence too") {
  HardInstance h;
  h.q = 8;
  h.n = 2;
  h.witness = make_witness(64, 2, 17, 9);
  h.x = IntMatrix{{mul_mod(9, inv_mod(17, 64), 64) % 8, 0}, {0, 1}};
  h.lower_bound_num = 18;
  h.lower_bound_den = 34;
  CHECK(mod_floor(det(h.x), Int(8)) == 1);
  check_all_lifts(h, 30);
}

TEST_CASE("hard instances: unit root case and larger moduli") {
  const HardInstance u = hard_instance(3, 2, 1);  // -1 is not a square mod 9
  CHECK(u.witness.alpha.value() == 1);
  CHECK(mod_floor(det(u.x), Int(3)) == 1);

  const HardInstance h = hard_instance(9973, 3, 1000);
  CHECK(mod_floor(det(h.x), Int(9973)) == 1);
  CHECK(h.lower_bound_num == h.witness.abs_n_beta);
  CHECK(h.lower_bound_den == 3 * h.witness.abs_alpha);

  const HardInstance v = hard_instance(3, 2, 17);
  CHECK(mod_floor(det(v.x), Int(3)) == 1);
}

TEST_CASE("hard instances for small q satisfy the congruence on all short lifts") {
  for (std::int64_t q = 3; q <= 16; ++q) {
    const HardInstance h = hard_instance(q, 2, 17);
    REQUIRE(mod_floor(det(h.x), Int(q)) == 1);
    check_all_lifts(h, 4 * q);
  }
}

TEST_CASE("Sarnak family") {
  const HardInstance s1 = sarnak_instance(1);
  CHECK(s1.q == 8);
  CHECK(s1.x == IntMatrix{{5, 0}, {0, 5}});
  CHECK(*s1.trace_residue == 18);
  CHECK(*s1.trace_modulus == 64);
  CHECK(s1.lower_bound_ceil() == 8);

  const HardInstance s2 = sarnak_instance(2);
  CHECK(*s2.trace_residue == 66);
  CHECK(*s2.trace_modulus == 256);
  CHECK(s2.lower_bound_ceil() == 32);
  CHECK_THROWS_AS(sarnak_instance(0), Error);

  for (std::int64_t m = 1; m <= 3; ++m) {
    const HardInstance s = sarnak_instance(m);
    const std::int64_t q2 = 64 * m * m;
    for_each_sl(EnumSpec::lifts_of(s.x, s.q, 2 * s.q * s.q), [&](std::span<const std::int64_t> g) {
      REQUIRE(((g[0] + g[3]) % q2 + q2) % q2 == (2 + 16 * m * m) % q2);
      return true;
    });
  }
}
