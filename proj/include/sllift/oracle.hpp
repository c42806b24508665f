#pragma once

// Exhaustive enumeration of bounded SL_n(Z) matrices: exact counts of
// |F_T|-style sets (optionally inside a congruence class mod q), norm
// histograms, and minimal-norm lifts of elements of SL_n(Z/qZ).
//
// The production kernel fixes all entries but the last one and solves
// det = 1 for it, since the determinant is linear in that entry. Its outer
// loop runs under OpenMP. The *_reference functions enumerate every entry
// and evaluate the full determinant; they exist as an independent check.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sllift/intmat.hpp"

namespace sllift {

inline constexpr std::uint64_t kDefaultBudget = 1'000'000'000;

/// SLLIFT_BUDGET from the environment when set, else kDefaultBudget.
std::uint64_t default_budget();

struct EnumSpec {
  std::size_t n = 2;
  /// 0 means no congruence constraint.
  std::int64_t q = 0;
  /// Row-major residues in [0, q); only meaningful when q > 0.
  std::optional<std::vector<std::int64_t>> target;
  /// Entry bound per row: |gamma_ij| <= caps[i].
  std::vector<std::int64_t> caps;

  static EnumSpec uniform(std::size_t n, std::int64_t cap);
  static EnumSpec skewed(std::size_t n, std::int64_t cap);  // last row cap^2
  static EnumSpec lifts_of(const IntMatrix& x, std::int64_t q, std::int64_t cap);
};

struct OracleOptions {
  std::uint64_t budget = default_budget();
  bool parallel = true;
};

/// Candidates visited by the solving kernel (product over all entries but the last).
std::uint64_t candidate_space(const EnumSpec& spec);

/// Exact number of matrices in SL_n(Z) satisfying the spec.
std::uint64_t count_sl(const EnumSpec& spec, const OracleOptions& opts = {});
/// Brute force over all n^2 entries with an exact determinant per candidate.
std::uint64_t count_sl_reference(const EnumSpec& spec, const OracleOptions& opts = {});

/// Serial visit of every matching matrix (row-major entries) in lexicographic
/// order of the enumeration. Return false from the callback to stop early.
void for_each_sl(const EnumSpec& spec, const std::function<bool(std::span<const std::int64_t>)>& visit,
                 const OracleOptions& opts = {});

/// h[t] = number of gamma in SL_n(Z) with max_norm(gamma) == t, t = 0..t_max.
std::vector<std::uint64_t> norm_histogram(std::size_t n, std::int64_t t_max, const OracleOptions& opts = {});

struct DrsRow {
  std::int64_t t = 0;
  std::uint64_t count = 0;
  /// count / t^{n^2 - n}; empty for t = 0.
  std::optional<double> ratio;
};

std::vector<DrsRow> drs_table(std::size_t n, std::span<const std::int64_t> t_list, const OracleOptions& opts = {});

struct MinLift {
  /// Smallest achievable max-norm, empty when nothing exists up to t_max.
  std::optional<std::int64_t> norm;
  /// Lexicographically first lift of that norm.
  std::optional<IntMatrix> witness;
  /// Largest cap actually scanned.
  std::int64_t scanned_to = 0;
};

/// Least T <= t_max such that some gamma = x (mod q), det gamma = 1,
/// max_norm(gamma) <= T exists. Caps grow by doubling along the values
/// |x_ij + q t| that entries can actually take.
MinLift min_lift_norm(const IntMatrix& x, std::int64_t q, std::int64_t t_max, const OracleOptions& opts = {});

/// The sorted set of absolute values |r + q t| <= t_max over residues r of x.
std::vector<std::int64_t> achievable_norms(const IntMatrix& x, std::int64_t q, std::int64_t t_max);

}  // namespace sllift
