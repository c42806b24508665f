#include "sllift/intmat.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace sllift {

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int quot = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --quot;
  return quot;
}

void require_positive(const Int& q) {
  if (q < 1) fail(Errc::InvalidArgument, "modulus must be positive");
}

}  // namespace

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) fail(Errc::BadShape, "matrix dimensions must be positive");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
  std::vector<IntVector> rs;
  for (const auto& r : rows) rs.emplace_back(r);
  *this = from_rows(rs);
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows) {
  if (rows.empty() || rows.front().empty()) fail(Errc::BadShape, "matrix dimensions must be positive");
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) fail(Errc::BadShape, "ragged rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntVector IntMatrix::row(std::size_t i) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntMatrix IntMatrix::row_block(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > rows_) fail(Errc::BadShape, "row block out of range");
  IntMatrix m(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(first + i, j);
  return m;
}

IntMatrix IntMatrix::stacked(const IntVector& v) const {
  if (v.size() != cols_) fail(Errc::BadShape, "stacked row has wrong length");
  IntMatrix m(rows_ + 1, cols_);
  std::copy(data_.begin(), data_.end(), m.data_.begin());
  std::copy(v.begin(), v.end(), m.data_.begin() + static_cast<std::ptrdiff_t>(rows_ * cols_));
  return m;
}

IntMatrix IntMatrix::without_column(std::size_t c) const {
  if (cols_ < 2) fail(Errc::BadShape, "cannot delete the only column");
  IntMatrix m(rows_, cols_ - 1);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0, k = 0; j < cols_; ++j)
      if (j != c) m(i, k++) = (*this)(i, j);
  return m;
}

IntMatrix IntMatrix::without_row_col(std::size_t r, std::size_t c) const {
  if (rows_ < 2 || cols_ < 2) fail(Errc::BadShape, "minor of a 1-wide matrix");
  IntMatrix m(rows_ - 1, cols_ - 1);
  for (std::size_t i = 0, a = 0; i < rows_; ++i) {
    if (i == r) continue;
    for (std::size_t j = 0, b = 0; j < cols_; ++j)
      if (j != c) m(a, b++) = (*this)(i, j);
    ++a;
  }
  return m;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) fail(Errc::BadShape, "product dimension mismatch");
  IntMatrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += a(i, k) * b(k, j);
    }
  return m;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ';';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ',';
      os << (*this)(i, j);
    }
  }
  return os.str();
}

Int mod_floor(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

IntMatrix reduce_mod(const IntMatrix& m, const Int& q) {
  require_positive(q);
  IntMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = mod_floor(m(i, j), q);
  return out;
}

IntMatrix signed_lift(const IntMatrix& m, const Int& q) {
  IntMatrix out = reduce_mod(m, q);
  const Int half = q / 2;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (out(i, j) > half) out(i, j) -= q;
  return out;
}

bool congruent_mod(const IntMatrix& a, const IntMatrix& b, const Int& q) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if ((a(i, j) - b(i, j)) % q != 0) return false;
  return true;
}

Int max_norm(std::span<const Int> v) {
  Int best = 0;
  for (const Int& x : v) best = std::max(best, Int(abs(x)));
  return best;
}

Int max_norm(const IntMatrix& m) { return max_norm(m.entries()); }

Int dot(std::span<const Int> a, std::span<const Int> b) {
  if (a.size() != b.size()) fail(Errc::BadShape, "dot product length mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

NormReport norm_report(const IntMatrix& m, double tolerance, int max_iterations) {
  NormReport report;
  report.max_norm = max_norm(m);
  if (report.max_norm == 0) return report;

  const std::size_t r = m.rows(), c = m.cols();
  std::vector<double> a(r * c);
  std::size_t start = c;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      a[i * c + j] = m(i, j).convert_to<double>();
      if (start == c && abs(m(i, j)) == report.max_norm) start = j;
    }

  // Starting from the unit vector on the column holding the largest entry
  // gives ||M x|| >= max_norm already; the Rayleigh sequence of the PSD
  // matrix M^T M is nondecreasing from there.
  std::vector<double> x(c, 0.0), y(r), z(c);
  x[start] = 1.0;
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    double ny = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < c; ++j) s += a[i * c + j] * x[j];
      y[i] = s;
      ny += s * s;
    }
    const double next = std::sqrt(ny);
    const bool converged = it > 0 && std::abs(next - estimate) <= tolerance * next;
    estimate = std::max(estimate, next);
    if (converged || next == 0.0) break;
    double nz = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < r; ++i) s += a[i * c + j] * y[i];
      z[j] = s;
      nz += s * s;
    }
    nz = std::sqrt(nz);
    if (nz == 0.0) break;
    for (std::size_t j = 0; j < c; ++j) x[j] = z[j] / nz;
  }
  report.op_norm_estimate = estimate;
  return report;
}

Int det(const IntMatrix& m) {
  if (!m.square()) fail(Errc::NotSquare, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  std::vector<std::vector<Int>> a(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);

  int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

IntMatrix adjugate(const IntMatrix& m) {
  if (!m.square()) fail(Errc::NotSquare, "adjugate of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 1) return IntMatrix::identity(1);
  IntMatrix adj(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Int minor = det(m.without_row_col(i, j));
      adj(j, i) = ((i + j) % 2 == 0) ? minor : Int(-minor);
    }
  return adj;
}

IntMatrix adjugate_mod(const IntMatrix& m, const Int& q) {
  require_positive(q);
  if (!m.square()) fail(Errc::NotSquare, "adjugate of a non-square matrix");
  const Int d = mod_floor(det(m), q);
  if (d != mod_floor(Int(1), q)) {
    fail(Errc::NotInvertible, "determinant is " + d.str() + " modulo " + q.str() + ", expected 1");
  }
  return reduce_mod(adjugate(m), q);
}

IntVector maximal_minors(const IntMatrix& b) {
  const std::size_t n = b.cols();
  if (b.rows() + 1 != n) {
    fail(Errc::BadShape, "expected an (n-1) x n matrix, got " + std::to_string(b.rows()) + "x" +
                             std::to_string(n));
  }
  IntVector c(n);
  if (n == 1) {
    c[0] = 1;
    return c;
  }
  for (std::size_t i = 0; i < n; ++i) {
    Int minor = det(b.without_column(i));
    // (-1)^{n+i} with 1-based i equals (-1)^{n+1+i} with 0-based i.
    c[i] = ((n + 1 + i) % 2 == 0) ? minor : Int(-minor);
  }
  return c;
}

IntVector solve_mod(const IntMatrix& a, const IntVector& w, const Int& q) {
  if (!a.square()) fail(Errc::NotSquare, "solve_mod needs a square system");
  if (w.size() != a.cols()) fail(Errc::BadShape, "right-hand side length mismatch");
  const IntMatrix inv = adjugate_mod(a, q);
  // a = w * A^{-1} as row vectors.
  const std::size_t n = a.rows();
  IntVector coeffs(n);
  for (std::size_t j = 0; j < n; ++j) {
    Int s = 0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * inv(i, j);
    coeffs[j] = mod_floor(s, q);
  }
  return coeffs;
}

Int round_nearest(const Int& num, const Int& den) { return floor_div(2 * num + den, 2 * den); }

IntVector size_reduce(const IntVector& v, const IntMatrix& b) {
  if (v.size() != b.cols()) fail(Errc::BadShape, "vector length does not match basis width");
  const std::size_t k = b.rows();
  IntMatrix gram(k, k);
  IntVector rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    const IntVector bi = b.row(i);
    rhs[i] = dot(bi, v);
    for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot(bi, b.row(j));
  }
  const Int g = det(gram);
  if (g == 0) fail(Errc::DependentRows, "Gram matrix is singular");

  IntVector out = v;
  for (std::size_t i = 0; i < k; ++i) {
    IntMatrix gi = gram;
    for (std::size_t r = 0; r < k; ++r) gi(r, i) = rhs[r];
    Int num = det(gi), den = g;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const Int coeff = round_nearest(num, den);
    if (coeff == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) out[j] -= coeff * b(i, j);
  }
  return out;
}

}  // namespace sllift
