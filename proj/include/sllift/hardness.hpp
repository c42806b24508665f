#pragma once

// Elements of SL_n(Z/qZ) whose every integral lift is large. A diagonal
// x = diag(b a^{-1}, b, ..., b) built from b^n = a (mod q^2) forces
// a*a_1 + a_2 + ... + a_n = n*b (mod q^2) on the diagonal of any lift, so a
// small |a| with a large |n b| gives a large lower bound.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sllift/intmat.hpp"
#include "sllift/residue.hpp"

namespace sllift {

struct RootWitness {
  std::int64_t modulus = 1;
  std::uint64_t n = 1;
  Residue alpha;
  Residue beta;
  std::int64_t abs_alpha = 0;
  std::int64_t abs_n_beta = 0;
  /// Enumeration position of alpha (0 for the first admissible candidate).
  std::size_t alpha_rank = 0;
  bool reached_target = false;
  bool degenerate = false;  // n = 1
  std::string source = "search";
};

/// Builds the witness fields from (alpha, beta) and checks beta^n = alpha.
RootWitness make_witness(std::int64_t modulus, std::uint64_t n, std::int64_t alpha, std::int64_t beta);

/// Candidate order for small alpha: 1, -1, 2, -2, ... up to |alpha| <= budget.
std::vector<std::int64_t> alpha_candidates(std::int64_t budget);

struct RootSearchOptions {
  RootOptions roots;
  /// Skip alpha whose root set exceeds roots.max_roots instead of failing.
  bool skip_oversized = true;
};

/// Best witness (largest |n b|) over units alpha with 1 <= |alpha| <= budget
/// modulo `q`, stopping once |n b| >= target (target <= 0 disables that).
RootWitness find_large_root(std::int64_t q, std::uint64_t n, std::int64_t alpha_budget, std::int64_t target,
                            const RootSearchOptions& opts = {});

/// For q with a prime-power factor p^m, p^{mk} < q, gcd(p - 1, n) > 1 and
/// p not dividing n: b = 1 (mod q / p^m), b = a (mod p^m) for a nontrivial
/// n-th root of unity a. Returns nullopt when no such factor exists.
std::optional<RootWitness> small_P_factor_root(std::int64_t q, std::uint64_t n, unsigned k);

struct PowerPair {
  Int alpha_integer;  // the integer p_j * p_a^{n-1}
  Residue alpha;
  Residue beta;
  std::int64_t prime;
  std::int64_t representative;
};

struct SmallPowersOptions {
  std::size_t prime_budget = 2000;  // how many primes the sieve may consume
};

/// m pairs beta_i^n = alpha_i (mod q) with small integer alpha_i, pairwise
/// alpha_i / alpha_j not a rational n-th power.
std::vector<PowerPair> small_nth_powers(std::int64_t q, std::uint64_t n, std::size_t count,
                                        const SmallPowersOptions& opts = {});

/// True iff a / b is the n-th power of a rational (a, b positive integers).
bool is_rational_nth_power_ratio(const Int& a, const Int& b, unsigned n);

struct HardInstance {
  std::int64_t q = 0;
  std::size_t n = 0;
  RootWitness witness;
  IntMatrix x;
  Int lower_bound_num;  // |n b|
  Int lower_bound_den;  // n |a|
  /// Integer lower bound ceil(num / den) on max_norm of any lift.
  Int lower_bound_ceil() const;
  double lower_bound() const;
  bool vacuous() const { return lower_bound_num < lower_bound_den; }

  /// Sarnak family bookkeeping (only for sarnak_instance).
  std::optional<Int> trace_residue;
  std::optional<Int> trace_modulus;
};

HardInstance hard_instance(std::int64_t q, std::uint64_t n, std::int64_t alpha_budget,
                           const RootSearchOptions& opts = {});

/// n = 2, q = 8m, x = diag(1 - 4m, 1 + 4m); every lift has trace 2 + 16m^2 mod q^2.
HardInstance sarnak_instance(std::int64_t m);

}  // namespace sllift
