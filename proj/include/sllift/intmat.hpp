#pragma once

// Dense exact-integer matrices and the mod-q linear algebra built on them.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "sllift/common.hpp"

namespace sllift {

using IntVector = std::vector<Int>;

class IntMatrix {
 public:
  IntMatrix() = default;
  /// Zero matrix; both dimensions must be positive.
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector row(std::size_t i) const;
  std::span<const Int> entries() const noexcept { return data_; }

  /// Rows [first, first + count).
  IntMatrix row_block(std::size_t first, std::size_t count) const;
  /// Appends `v` as a new last row.
  IntMatrix stacked(const IntVector& v) const;
  IntMatrix without_column(std::size_t j) const;
  IntMatrix without_row_col(std::size_t i, std::size_t j) const;
  IntMatrix transposed() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// Non-negative remainder for arbitrary-precision values.
Int mod_floor(const Int& a, const Int& m);
/// Entrywise reduction into [0, q).
IntMatrix reduce_mod(const IntMatrix& m, const Int& q);
/// Entrywise minimal-absolute-value representative (ties to +q/2).
IntMatrix signed_lift(const IntMatrix& m, const Int& q);
bool congruent_mod(const IntMatrix& a, const IntMatrix& b, const Int& q);

Int max_norm(const IntMatrix& m);
Int max_norm(std::span<const Int> v);
Int dot(std::span<const Int> a, std::span<const Int> b);

struct NormReport {
  Int max_norm;
  /// Largest singular value from power iteration on M^T M; informational.
  double op_norm_estimate = 0.0;
};

NormReport norm_report(const IntMatrix& m, double tolerance = 1e-12, int max_iterations = 10000);

/// Exact determinant (Bareiss fraction-free elimination).
Int det(const IntMatrix& m);

/// Exact integer adjugate.
IntMatrix adjugate(const IntMatrix& m);

/// Inverse modulo q of a matrix with det = 1 (mod q), reduced into [0, q).
IntMatrix adjugate_mod(const IntMatrix& m, const Int& q);

/// Cofactor vector c of an (n-1) x n matrix with c_i = (-1)^{n+i} det(B minus
/// column i), 1-based, so that det(stack(B, v)) = <v, c> for every row v.
IntVector maximal_minors(const IntMatrix& b);

/// Coefficients a (mod q, in [0, q)) with sum_i a_i row_i(A) = w (mod q).
/// When det(stack(rows 1..n-1 of A, w)) = 0 (mod q) the last one is 0.
IntVector solve_mod(const IntMatrix& a, const IntVector& w, const Int& q);

/// v - sum_i round(a_i) row_i(B), where a solves the rational normal
/// equations (B B^T) a = B v exactly. The result is congruent to v modulo the
/// row lattice of B.
IntVector size_reduce(const IntVector& v, const IntMatrix& b);

/// Round-half-up of num/den for den > 0.
Int round_nearest(const Int& num, const Int& den);

}  // namespace sllift
