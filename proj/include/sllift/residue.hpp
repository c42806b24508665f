#pragma once

// Modular arithmetic on 64-bit moduli: signed representatives, factorization,
// CRT, n-th power residues and exact n-th root sets.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sllift/common.hpp"

namespace sllift {

/// Products are formed in 128 bits, so any modulus below 2^62 is safe.
inline constexpr std::int64_t kMaxModulus = std::int64_t{1} << 62;
inline constexpr std::int64_t kDefaultPrimeBound = 1'000'000;

/// An element of Z/mZ stored by its canonical representative in [0, m).
class Residue {
 public:
  Residue() = default;
  /// Reduces any integer `a` modulo `m` (m >= 1).
  Residue(std::int64_t a, std::int64_t m);

  std::int64_t value() const noexcept { return value_; }
  std::int64_t modulus() const noexcept { return modulus_; }

  friend bool operator==(const Residue&, const Residue&) = default;
  friend auto operator<=>(const Residue&, const Residue&) = default;

 private:
  std::int64_t value_ = 0;
  std::int64_t modulus_ = 1;
};

struct PrimePower {
  std::int64_t prime;
  int exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Primes strictly increasing; the product of p^e is the factored integer.
using Factorization = std::vector<PrimePower>;

// -- basic integer helpers ---------------------------------------------------

std::int64_t mod_floor(std::int64_t a, std::int64_t m);
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t pow_mod(std::int64_t base, std::uint64_t exp, std::int64_t m);
/// Inverse of a modulo m; throws NotUnit when gcd(a, m) != 1.
std::int64_t inv_mod(std::int64_t a, std::int64_t m);
/// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::int64_t n);
/// Euler's totient of p^e.
std::int64_t totient(const PrimePower& pp);
std::int64_t prime_power_value(const PrimePower& pp);

// -- operations ----------------------------------------------------------------

/// Minimal-absolute-value integer congruent to a; ties (m even, a = m/2) go to +m/2.
std::int64_t signed_lift(const Residue& a);
/// |a| in the sense min{|a'| : a' in a + mZ}.
std::int64_t abs_value(const Residue& a);

struct FactorOptions {
  std::int64_t trial_bound = 1'000'000;
  /// Upper bound on Pollard-rho iterations per cofactor.
  std::uint64_t rho_effort = 1u << 22;
  std::uint64_t seed = 0x5eed;
};

Factorization factorize(std::int64_t m, const FactorOptions& opts = {});

/// Solves x = r_i (mod m_i) for pairwise coprime moduli.
Residue crt(std::span<const std::pair<std::int64_t, std::int64_t>> congruences);

struct RootOptions {
  std::int64_t prime_bound = kDefaultPrimeBound;
  /// Maximum size of the returned set; TooManyRoots beyond it.
  std::size_t max_roots = 1'000'000;
};

/// All n-th roots of the prime-power-modulus residue `alpha` mod p^e, sorted.
/// Roots mod p come from an exhaustive scan, then a lifting tree extends each
/// root mod p^j over the p candidates mod p^{j+1}.
std::vector<std::int64_t> nth_roots_prime_power(std::int64_t alpha, std::uint64_t n,
                                                const PrimePower& pp,
                                                const RootOptions& opts = {});

/// The complete, sorted set {b in (Z/mZ)^x : b^n = alpha}.
std::vector<Residue> nth_roots(const Residue& alpha, std::uint64_t n, const RootOptions& opts = {});
std::vector<Residue> nth_roots(const Residue& alpha, std::uint64_t n, const Factorization& fm,
                               const RootOptions& opts = {});

/// True iff a lies in (Z/mZ)^{x n}.
bool is_nth_power_residue(const Residue& a, std::uint64_t n);
bool is_nth_power_residue(const Residue& a, std::uint64_t n, const Factorization& fm);

/// Exact integer n-th root of a non-negative value, if it exists.
std::optional<Int> exact_nth_root(const Int& value, unsigned n);

}  // namespace sllift
