#pragma once

// Constructive lifting of SL_n(Z/qZ) elements to SL_n(Z): lift the top n-1
// rows to an extendable integer block, complete it with a short last row, then
// correct that row modulo q using combinations of the top rows.

#include <cstdint>
#include <random>

#include "sllift/intmat.hpp"

namespace sllift {

struct LiftCertificate {
  IntMatrix gamma;
  std::int64_t q = 1;
  std::size_t n = 0;
  Int first_rows_max = 0;
  Int last_row_max = 0;
  std::uint64_t trials_used = 0;
  std::uint64_t seed = 0;
  /// True when the deterministic CRT fallback produced the top rows.
  bool used_fallback = false;
};

struct LiftOptions {
  /// Multiplier C in the entry bound C * log2(q + 2) for the top-row offset X.
  double bound_constant = 16.0;
  /// Random draws per doubling level of the offset range.
  std::uint64_t draws_per_level = 64;
  /// Skip the randomized stage (exercises the CRT fallback).
  bool skip_random = false;
  /// Largest prime-product threshold tried by the fallback.
  std::int64_t max_fallback_k = 60;
  std::uint64_t fallback_draws = 4096;
};

/// C * log2(q + 2), floored, at least 1.
std::int64_t offset_bound(std::int64_t q, double bound_constant);

/// True iff the (n-1) x n block is the top of some SL_n(Z) matrix, i.e. the
/// gcd of its maximal minors is 1.
bool is_extendable(const IntMatrix& b);

/// True iff gcd(maximal minors, q) = 1.
bool is_extendable_mod(const IntMatrix& a, std::int64_t q);

struct RowLift {
  IntMatrix rows;
  IntMatrix offset;  // X with rows = signed_lift(A) + q X
  std::uint64_t trials = 0;
  bool used_fallback = false;
};

/// Finds B = A0 + qX (A0 the signed lift of A) with is_extendable(B).
RowLift lift_rows(const IntMatrix& a, std::int64_t q, std::uint64_t seed, const LiftOptions& opts = {});

/// A last row v with det(stack(B, v)) = 1 and max_norm(v) <= (n/2) max_norm(B) + 1.
IntVector complete_rows(const IntMatrix& b);

/// Full lift of x (det x = 1 mod q) to gamma in SL_n(Z) with gamma = x mod q.
LiftCertificate lift(const IntMatrix& x, std::int64_t q, std::uint64_t seed, const LiftOptions& opts = {});

/// Uniformly random element of SL_n(Z/qZ), entries in [0, q).
IntMatrix random_sl_mod(std::size_t n, std::int64_t q, std::mt19937_64& rng);

}  // namespace sllift
