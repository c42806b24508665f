#include "sllift/actions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>

#include "sllift/residue.hpp"

namespace sllift {

std::string_view to_string(Space s) { return s == Space::Affine ? "A" : "P"; }

namespace {

std::vector<std::int64_t> reduced(std::int64_t q, std::vector<std::int64_t> v) {
  if (q < 1) fail(Errc::InvalidArgument, "q must be positive");
  if (v.empty()) fail(Errc::InvalidArgument, "points need at least one coordinate");
  for (auto& c : v) c = mod_floor(c, q);
  return v;
}

bool primitive(std::int64_t q, std::span<const std::int64_t> v) {
  std::int64_t g = q;
  for (std::int64_t c : v) g = std::gcd(g, c);
  return g == 1;
}

std::vector<std::int64_t> units(std::int64_t q) {
  std::vector<std::int64_t> u;
  for (std::int64_t a = 1; a <= std::max<std::int64_t>(q - 1, 1); ++a)
    if (std::gcd(a, q) == 1) u.push_back(a % q);
  return u;
}

std::int64_t ipow(std::int64_t b, std::size_t e) {
  std::int64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Maps a reduced vector to its index in lexicographic order over (Z/q)^n.
std::size_t encode(std::span<const std::int64_t> v, std::int64_t q) {
  std::size_t code = 0;
  for (std::int64_t c : v) code = code * static_cast<std::size_t>(q) + static_cast<std::size_t>(c);
  return code;
}

std::vector<std::int64_t> decode(std::size_t code, std::size_t n, std::int64_t q) {
  std::vector<std::int64_t> v(n);
  for (std::size_t i = n; i-- > 0;) {
    v[i] = static_cast<std::int64_t>(code % static_cast<std::size_t>(q));
    code /= static_cast<std::size_t>(q);
  }
  return v;
}

// Per-space lookup from an encoded vector to a point index (or -1).
struct PointIndex {
  std::size_t n;
  std::int64_t q;
  Space space;
  std::vector<std::vector<std::int64_t>> points;
  std::vector<std::int64_t> slot;  // encoded vector -> point index

  PointIndex(Space s, std::size_t dim, std::int64_t modulus) : n(dim), q(modulus), space(s) {
    const std::int64_t total = ipow(q, n);
    if (total > 50'000'000) fail(Errc::BudgetExceeded, "space (Z/q)^n too large to tabulate");
    slot.assign(static_cast<std::size_t>(total), -1);
    for (std::size_t code = 0; code < slot.size(); ++code) {
      const auto v = decode(code, n, q);
      if (!primitive(q, v)) continue;
      if (space == Space::Affine) {
        slot[code] = static_cast<std::int64_t>(points.size());
        points.push_back(v);
        continue;
      }
      const auto c = canonical_projective(q, v);
      const std::size_t ccode = encode(c, q);
      // The canonical element is lex-least, so it is visited first in its orbit.
      if (ccode == code) {
        slot[code] = static_cast<std::int64_t>(points.size());
        points.push_back(v);
      } else {
        slot[code] = slot[ccode];
      }
    }
  }

  std::int64_t lookup(std::span<const std::int64_t> v) const { return slot[encode(v, q)]; }
};

DistanceRecord make_record(std::span<const std::int64_t> x, std::span<const std::int64_t> y, std::int64_t q,
                           std::int64_t t_max) {
  DistanceRecord r;
  r.x.assign(x.begin(), x.end());
  r.y.assign(y.begin(), y.end());
  r.q = q;
  r.t_max = t_max;
  return r;
}

template <class Match>
DistanceRecord search(DistanceRecord rec, std::size_t n, std::int64_t t_max, const OracleOptions& opts,
                      Match&& match) {
  if (t_max < 1) return rec;
  for (std::int64_t t = 1;; t = std::min(2 * t, t_max)) {
    const Ball ball(n, t, opts);
    for (std::size_t i = 0; i < ball.size(); ++i) {
      if (!match(ball.entries(i))) continue;
      rec.min_max_norm = ball.norm(i);
      rec.witness = ball.matrix(i);
      rec.log_q_exponent = log_q(ball.norm(i), rec.q);
      return rec;
    }
    if (t == t_max) return rec;
  }
}

std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, double p) {
  if (sorted.empty()) return 0;
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

}  // namespace

PointA::PointA(std::int64_t modulus, std::vector<std::int64_t> v) : q(modulus), coords(reduced(modulus, std::move(v))) {
  if (!primitive(q, coords)) fail(Errc::InvalidArgument, "gcd(q, coords) must be 1");
}

PointP::PointP(std::int64_t modulus, std::vector<std::int64_t> v) : q(modulus) {
  coords = reduced(modulus, std::move(v));
  if (!primitive(q, coords)) fail(Errc::InvalidArgument, "gcd(q, coords) must be 1");
  coords = canonical_projective(q, coords);
}

std::vector<std::int64_t> canonical_projective(std::int64_t q, std::span<const std::int64_t> v) {
  std::vector<std::int64_t> base(v.begin(), v.end());
  for (auto& c : base) c = mod_floor(c, q);
  std::vector<std::int64_t> best = base, cur(base.size());
  for (std::int64_t u : units(q)) {
    for (std::size_t i = 0; i < base.size(); ++i) cur[i] = mul_mod(u, base[i], q);
    if (cur < best) best = cur;
  }
  return best;
}

std::vector<PointA> affine_points(std::size_t n, std::int64_t q) {
  const PointIndex idx(Space::Affine, n, q);
  std::vector<PointA> out;
  for (const auto& p : idx.points) out.emplace_back(q, p);
  return out;
}

std::vector<PointP> projective_points(std::size_t n, std::int64_t q) {
  const PointIndex idx(Space::Projective, n, q);
  std::vector<PointP> out;
  for (const auto& p : idx.points) out.emplace_back(q, p);
  return out;
}

Ball::Ball(std::size_t n, std::int64_t t, const OracleOptions& opts) : n_(n), t_(t) {
  std::vector<std::int64_t> flat;
  std::vector<std::int64_t> norms;
  for_each_sl(
      EnumSpec::uniform(n, t),
      [&](std::span<const std::int64_t> m) {
        std::int64_t norm = 0;
        for (std::int64_t v : m) norm = std::max(norm, v < 0 ? -v : v);
        flat.insert(flat.end(), m.begin(), m.end());
        norms.push_back(norm);
        return true;
      },
      opts);
  std::vector<std::size_t> order(norms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] < norms[b]; });
  const std::size_t k = n * n;
  entries_.resize(flat.size());
  norms_.resize(norms.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(order[i] * k), k,
                entries_.begin() + static_cast<std::ptrdiff_t>(i * k));
    norms_[i] = norms[order[i]];
  }
}

IntMatrix Ball::matrix(std::size_t i) const {
  IntMatrix m(n_, n_);
  const auto e = entries(i);
  for (std::size_t k = 0; k < e.size(); ++k) m(k / n_, k % n_) = e[k];
  return m;
}

std::vector<std::int64_t> act(std::span<const std::int64_t> gamma, std::span<const std::int64_t> v, std::int64_t q) {
  const std::size_t n = v.size();
  std::vector<std::int64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    __int128 s = 0;
    for (std::size_t j = 0; j < n; ++j) s += static_cast<__int128>(gamma[i * n + j]) * v[j];
    out[i] = static_cast<std::int64_t>(((s % q) + q) % q);
  }
  return out;
}

std::optional<double> log_q(std::int64_t value, std::int64_t q) {
  if (q < 2 || value < 1) return std::nullopt;
  return std::log(static_cast<double>(value)) / std::log(static_cast<double>(q));
}

DistanceRecord dist_affine(const PointA& x, const PointA& y, std::int64_t t_max, const OracleOptions& opts) {
  if (x.q != y.q || x.dim() != y.dim()) fail(Errc::InvalidArgument, "points must share q and dimension");
  return search(make_record(x.coords, y.coords, x.q, t_max), x.dim(), t_max, opts,
                [&](std::span<const std::int64_t> g) { return act(g, x.coords, x.q) == y.coords; });
}

DistanceRecord dist_projective(const PointP& x, const PointP& y, std::int64_t t_max, const OracleOptions& opts) {
  if (x.q != y.q || x.dim() != y.dim()) fail(Errc::InvalidArgument, "points must share q and dimension");
  return search(make_record(x.coords, y.coords, x.q, t_max), x.dim(), t_max, opts,
                [&](std::span<const std::int64_t> g) {
                  return canonical_projective(x.q, act(g, x.coords, x.q)) == y.coords;
                });
}

DiameterProfile diameter_profile(Space space, std::size_t n, std::int64_t q, std::int64_t t_max,
                                 const OracleOptions& opts) {
  if (n == 0 || q < 1) fail(Errc::InvalidArgument, "diameter_profile needs n >= 1 and q >= 1");
  const PointIndex idx(space, n, q);
  const std::size_t count = idx.points.size();
  DiameterProfile prof;
  prof.space = space;
  prof.n = n;
  prof.q = q;
  prof.t_max = t_max;
  prof.points = count;
  prof.pairs = count * count;
  prof.point_coords = idx.points;
  prof.table.assign(count, std::vector<std::int64_t>(count, 0));

  std::vector<std::size_t> missing(count, count);
  for (std::int64_t t = 1; t_max >= 1; t = std::min(2 * t, t_max)) {
    const Ball ball(n, t, opts);
#pragma omp parallel for schedule(dynamic, 1) if (opts.parallel)
    for (std::size_t s = 0; s < count; ++s) {
      if (missing[s] == 0) continue;
      auto& row = prof.table[s];
      std::fill(row.begin(), row.end(), 0);
      std::size_t left = count;
      for (std::size_t i = 0; i < ball.size() && left > 0; ++i) {
        const auto img = act(ball.entries(i), idx.points[s], q);
        const auto target = static_cast<std::size_t>(idx.lookup(img));
        if (row[target] == 0) {
          row[target] = ball.norm(i);
          --left;
        }
      }
      missing[s] = left;
    }
    const bool done = std::all_of(missing.begin(), missing.end(), [](std::size_t m) { return m == 0; });
    if (done || t == t_max) break;
  }

  std::vector<std::int64_t> reached;
  for (const auto& row : prof.table)
    for (std::int64_t v : row)
      if (v > 0) reached.push_back(v);
  prof.unreached = prof.pairs - reached.size();
  std::sort(reached.begin(), reached.end());
  if (prof.unreached == 0 && !reached.empty()) {
    prof.diameter_norm = reached.back();
    prof.diameter_exponent = log_q(reached.back(), q);
  }
  prof.q50 = nearest_rank(reached, 0.50);
  prof.q90 = nearest_rank(reached, 0.90);
  prof.q99 = nearest_rank(reached, 0.99);
  prof.q50_exponent = log_q(prof.q50, q);
  prof.q90_exponent = log_q(prof.q90, q);
  prof.q99_exponent = log_q(prof.q99, q);
  return prof;
}

DistanceRecord projective_bad_pair(std::int64_t q, std::int64_t t_max, const OracleOptions& opts) {
  if (q < 2 || q % 2 != 0) fail(Errc::InvalidArgument, "projective_bad_pair needs an even q >= 2");
  return dist_projective(PointP(q, {1, 0}), PointP(q, {1, q / 2}), t_max, opts);
}

}  // namespace sllift
