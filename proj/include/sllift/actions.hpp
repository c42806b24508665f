#pragma once

// SL_n(Z) acting on primitive vectors mod q (the affine space A_q) and on
// their unit-scaling classes (the projective space P_q). The distance of an
// ordered pair is the least max-norm of a gamma carrying one to the other.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sllift/intmat.hpp"
#include "sllift/oracle.hpp"

namespace sllift {

enum class Space { Affine, Projective };

std::string_view to_string(Space s);

struct PointA {
  std::int64_t q = 1;
  std::vector<std::int64_t> coords;

  /// Reduces coords mod q; InvalidArgument unless gcd(q, coords) = 1.
  PointA(std::int64_t q, std::vector<std::int64_t> coords);
  std::size_t dim() const { return coords.size(); }
  bool operator==(const PointA&) const = default;
};

struct PointP {
  std::int64_t q = 1;
  /// Lexicographically least element of {u * v : u a unit mod q}.
  std::vector<std::int64_t> coords;

  PointP(std::int64_t q, std::vector<std::int64_t> coords);
  explicit PointP(const PointA& a) : PointP(a.q, a.coords) {}
  std::size_t dim() const { return coords.size(); }
  bool operator==(const PointP&) const = default;
};

/// Canonical projective representative of v (entries reduced mod q first).
std::vector<std::int64_t> canonical_projective(std::int64_t q, std::span<const std::int64_t> v);

/// All of A_q (resp. P_q) in dimension n, lexicographic order.
std::vector<PointA> affine_points(std::size_t n, std::int64_t q);
std::vector<PointP> projective_points(std::size_t n, std::int64_t q);

struct DistanceRecord {
  std::vector<std::int64_t> x;
  std::vector<std::int64_t> y;
  std::int64_t q = 1;
  /// Empty when no gamma with max_norm <= t_max exists (Unreached).
  std::optional<std::int64_t> min_max_norm;
  std::int64_t t_max = 0;
  std::optional<IntMatrix> witness;
  /// log(min_max_norm) / log(q); empty when unreached or q < 2.
  std::optional<double> log_q_exponent;
};

/// F_T for the uniform cap T, ordered by (max-norm, row-major lex).
class Ball {
 public:
  Ball(std::size_t n, std::int64_t t, const OracleOptions& opts = {});
  std::size_t n() const { return n_; }
  std::int64_t radius() const { return t_; }
  std::size_t size() const { return norms_.size(); }
  std::int64_t norm(std::size_t i) const { return norms_[i]; }
  std::span<const std::int64_t> entries(std::size_t i) const { return {&entries_[i * n_ * n_], n_ * n_}; }
  IntMatrix matrix(std::size_t i) const;

 private:
  std::size_t n_;
  std::int64_t t_;
  std::vector<std::int64_t> entries_;
  std::vector<std::int64_t> norms_;
};

/// gamma * v mod q, v a column vector.
std::vector<std::int64_t> act(std::span<const std::int64_t> gamma, std::span<const std::int64_t> v, std::int64_t q);

DistanceRecord dist_affine(const PointA& x, const PointA& y, std::int64_t t_max, const OracleOptions& opts = {});
DistanceRecord dist_projective(const PointP& x, const PointP& y, std::int64_t t_max,
                               const OracleOptions& opts = {});

struct DiameterProfile {
  Space space = Space::Projective;
  std::size_t n = 2;
  std::int64_t q = 1;
  std::int64_t t_max = 0;
  std::size_t points = 0;
  std::size_t pairs = 0;
  std::size_t unreached = 0;
  /// Present only when every ordered pair was reached.
  std::optional<std::int64_t> diameter_norm;
  /// Nearest-rank quantiles over reached pairs.
  std::int64_t q50 = 0, q90 = 0, q99 = 0;
  std::optional<double> diameter_exponent, q50_exponent, q90_exponent, q99_exponent;
  /// table[i][j] = min-norm from points[i] to points[j] (0 when unreached).
  std::vector<std::vector<std::int64_t>> table;
  std::vector<std::vector<std::int64_t>> point_coords;
};

/// Exact min-norms over all ordered pairs of the space; the ball grows by
/// doubling until every pair is reached or t_max is hit.
DiameterProfile diameter_profile(Space space, std::size_t n, std::int64_t q, std::int64_t t_max,
                                 const OracleOptions& opts = {});

/// dist_projective(e, (1, q/2)) with e = (1, 0), n = 2, q even.
DistanceRecord projective_bad_pair(std::int64_t q, std::int64_t t_max, const OracleOptions& opts = {});

std::optional<double> log_q(std::int64_t value, std::int64_t q);

}  // namespace sllift
