#include "sllift/lifting.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>

#include "sllift/residue.hpp"

namespace sllift {

namespace {

// Returns (g, s, t) with s a + t b = g = gcd(a, b) >= 0.
std::tuple<Int, Int, Int> ext_gcd(const Int& a, const Int& b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Int quot = old_r / r;
    Int tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
    tmp = old_t - quot * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {Int(-old_r), Int(-old_s), Int(-old_t)};
  return {old_r, old_s, old_t};
}

// Bezout coefficients u with <u, c> = gcd(c) >= 0, plus that gcd.
std::pair<IntVector, Int> bezout(const IntVector& c) {
  IntVector coef(c.size(), 0);
  Int g = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (g == 0) {
      g = abs(c[i]);
      coef[i] = c[i] < 0 ? -1 : 1;
      continue;
    }
    auto [ng, s, t] = ext_gcd(g, c[i]);
    for (std::size_t j = 0; j < i; ++j) coef[j] *= s;
    coef[i] = t;
    g = ng;
  }
  return {coef, g};
}

Int gcd_all(const IntVector& v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  return g;
}

IntMatrix offset_matrix(std::size_t rows, std::size_t cols, std::uint64_t range, std::mt19937_64& rng) {
  IntMatrix x(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) x(i, j) = static_cast<std::int64_t>(rng() % range);
  return x;
}

IntMatrix add_scaled(const IntMatrix& base, const IntMatrix& x, const Int& scale) {
  IntMatrix out = base;
  for (std::size_t i = 0; i < base.rows(); ++i)
    for (std::size_t j = 0; j < base.cols(); ++j) out(i, j) += scale * x(i, j);
  return out;
}

// Deterministic construction: make B = top of the identity modulo every small
// prime p < K not dividing q (one CRT per entry), then search a bounded
// multiple of P q on top of it, escalating K.
std::optional<RowLift> crt_fallback(const IntMatrix& a0, std::int64_t q, std::int64_t bound,
                                    std::uint64_t& trials, std::mt19937_64& rng, const LiftOptions& opts) {
  const std::size_t rows = a0.rows(), cols = a0.cols();
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2; p < opts.max_fallback_k; ++p) {
    if (!is_prime(p) || q % p == 0) continue;
    primes.push_back(p);

    Int prod = 1;
    for (std::int64_t pr : primes) prod *= pr;
    IntMatrix x1(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        // x1 = (delta_ij - a0_ij) q^{-1} mod p for every p, glued by CRT.
        Int value = 0, modulus = 1;
        for (std::int64_t pr : primes) {
          const std::int64_t target = (i == j ? 1 : 0);
          const std::int64_t a_mod = static_cast<std::int64_t>(mod_floor(a0(i, j), Int(pr)));
          const std::int64_t r = mul_mod(mod_floor(target - a_mod, pr), inv_mod(q % pr, pr), pr);
          const std::int64_t cur = static_cast<std::int64_t>(mod_floor(value, Int(pr)));
          const std::int64_t t = mul_mod(mod_floor(r - cur, pr),
                                         inv_mod(static_cast<std::int64_t>(mod_floor(modulus, Int(pr))), pr), pr);
          value += modulus * t;
          modulus *= pr;
        }
        x1(i, j) = value;
      }
    const IntMatrix base = add_scaled(a0, x1, Int(q));
    const Int step = prod * q;
    for (std::uint64_t d = 0; d < opts.fallback_draws; ++d) {
      const IntMatrix x2 = d == 0 ? IntMatrix(rows, cols)
                                  : offset_matrix(rows, cols, static_cast<std::uint64_t>(bound) + 1, rng);
      ++trials;
      IntMatrix b = add_scaled(base, x2, step);
      if (is_extendable(b)) {
        IntMatrix offset = add_scaled(x1, x2, prod);
        return RowLift{std::move(b), std::move(offset), trials, true};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::int64_t offset_bound(std::int64_t q, double bound_constant) {
  const double b = std::floor(bound_constant * std::log2(static_cast<double>(q) + 2.0));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(b));
}

bool is_extendable(const IntMatrix& b) { return gcd_all(maximal_minors(b)) == 1; }

bool is_extendable_mod(const IntMatrix& a, std::int64_t q) {
  return boost::multiprecision::gcd(gcd_all(maximal_minors(a)), Int(q)) == 1;
}

RowLift lift_rows(const IntMatrix& a, std::int64_t q, std::uint64_t seed, const LiftOptions& opts) {
  if (q < 1) fail(Errc::InvalidArgument, "q must be positive");
  if (a.rows() + 1 != a.cols()) fail(Errc::BadShape, "lift_rows expects an (n-1) x n matrix");
  const IntMatrix a0 = signed_lift(a, Int(q));
  if (!is_extendable_mod(a0, q)) {
    fail(Errc::NotExtendableModQ, "rows do not extend to SL_n(Z/" + std::to_string(q) + "Z)");
  }
  const std::size_t rows = a.rows(), cols = a.cols();
  std::mt19937_64 rng(seed);
  std::uint64_t trials = 1;
  if (is_extendable(a0)) return RowLift{a0, IntMatrix(rows, cols), trials, false};

  const std::int64_t bound = offset_bound(q, opts.bound_constant);
  if (!opts.skip_random) {
    std::uint64_t range = 2;
    while (true) {
      const auto level = std::min<std::uint64_t>(range, static_cast<std::uint64_t>(bound) + 1);
      for (std::uint64_t d = 0; d < opts.draws_per_level; ++d) {
        IntMatrix x = offset_matrix(rows, cols, level, rng);
        ++trials;
        IntMatrix b = add_scaled(a0, x, Int(q));
        if (is_extendable(b)) return RowLift{std::move(b), std::move(x), trials, false};
      }
      if (level > static_cast<std::uint64_t>(bound)) break;
      range *= 2;
    }
  }
  if (auto found = crt_fallback(a0, q, bound, trials, rng, opts)) return *found;
  fail(Errc::SearchExhausted, "no extendable lift of the top rows found for q = " + std::to_string(q) +
                                  " after " + std::to_string(trials) + " trials");
}

IntVector complete_rows(const IntMatrix& b) {
  const IntVector c = maximal_minors(b);
  auto [v0, g] = bezout(c);
  if (g != 1) fail(Errc::NotExtendable, "maximal minors have gcd " + g.str());
  IntVector v = size_reduce(v0, b);
  if (det(b.stacked(v)) != 1) throw std::logic_error("complete_rows: completion lost determinant 1");
  return v;
}

LiftCertificate lift(const IntMatrix& x, std::int64_t q, std::uint64_t seed, const LiftOptions& opts) {
  if (!x.square()) fail(Errc::NotSquare, "lift expects a square matrix");
  if (q < 1) fail(Errc::InvalidArgument, "q must be positive");
  const std::size_t n = x.rows();
  LiftCertificate cert;
  cert.q = q;
  cert.n = n;
  cert.seed = seed;

  const Int qq = q;
  const IntMatrix xr = reduce_mod(x, qq);
  if (mod_floor(det(xr), qq) != mod_floor(Int(1), qq)) {
    fail(Errc::InvalidInput, "det(x) = " + mod_floor(det(xr), qq).str() + " modulo " + qq.str());
  }
  if (q == 1 || n == 1) {
    cert.gamma = IntMatrix::identity(n);
    cert.first_rows_max = n == 1 ? Int(0) : Int(1);
    cert.last_row_max = 1;
    return cert;
  }

  RowLift top = lift_rows(xr.row_block(0, n - 1), q, seed, opts);
  const IntMatrix& b = top.rows;
  const IntVector v = complete_rows(b);

  // w = a_n - v lies in the span of the top rows mod q; its last coefficient vanishes.
  IntVector w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = mod_floor(xr(n - 1, j) - v[j], qq);
  const IntVector alpha = solve_mod(xr, w, qq);
  if (alpha[n - 1] != 0) throw std::logic_error("lift: last coefficient of the mod-q solve is nonzero");

  IntVector last = v;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Int ai = alpha[i];
    if (ai > qq / 2) ai -= qq;
    if (ai == 0) continue;
    for (std::size_t j = 0; j < n; ++j) last[j] += ai * b(i, j);
  }
  cert.gamma = b.stacked(last);
  if (det(cert.gamma) != 1 || !congruent_mod(cert.gamma, xr, qq)) {
    throw std::logic_error("lift: certificate failed its exact re-check");
  }
  cert.first_rows_max = max_norm(b);
  cert.last_row_max = max_norm(last);
  cert.trials_used = top.trials;
  cert.used_fallback = top.used_fallback;
  return cert;
}

IntMatrix random_sl_mod(std::size_t n, std::int64_t q, std::mt19937_64& rng) {
  if (n == 0 || q < 1) fail(Errc::InvalidArgument, "random_sl_mod needs n >= 1 and q >= 1");
  const auto uq = static_cast<std::uint64_t>(q);
  if (q == 1) return IntMatrix(n, n);
  if (n == 1) return IntMatrix{{Int(1)}};
  while (true) {
    IntMatrix top(n - 1, n);
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = 0; j < n; ++j) top(i, j) = static_cast<std::int64_t>(rng() % uq);
    IntVector c = maximal_minors(top);
    c.push_back(q);
    auto [coef, g] = bezout(c);
    if (g != 1) continue;
    coef.pop_back();
    // Every other last row differs from coef by a combination of the top rows.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto r = static_cast<std::int64_t>(rng() % uq);
      for (std::size_t j = 0; j < n; ++j) coef[j] += r * top(i, j);
    }
    return reduce_mod(top.stacked(coef), Int(q));
  }
}

}  // namespace sllift
