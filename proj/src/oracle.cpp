#include "sllift/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <string>

#include "sllift/residue.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace sllift {

namespace {

using i128 = __int128;

// Laplace expansion of the rows [row, n) restricted to the columns in mask.
i128 det_small(const std::int64_t* a, std::size_t stride, std::uint32_t col_mask, std::size_t row,
               std::size_t rows_end) {
  if (row == rows_end) return 1;
  i128 total = 0;
  int sign = 1;
  for (std::size_t j = 0; j < stride; ++j) {
    if (!(col_mask & (1u << j))) continue;
    const std::int64_t v = a[row * stride + j];
    if (v != 0) total += sign * static_cast<i128>(v) * det_small(a, stride, col_mask & ~(1u << j), row + 1, rows_end);
    sign = -sign;
  }
  return total;
}

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

struct Plan {
  std::size_t n = 0;
  std::int64_t q = 0;
  bool constrained = false;
  std::vector<std::int64_t> target;
  /// choices[k]: admissible values for entry k (row-major), ascending.
  std::vector<std::vector<std::int64_t>> choices;
};

std::vector<std::int64_t> entry_choices(std::int64_t cap, std::int64_t q, std::optional<std::int64_t> residue) {
  std::vector<std::int64_t> out;
  if (cap < 0) return out;
  if (!residue) {
    for (std::int64_t v = -cap; v <= cap; ++v) out.push_back(v);
    return out;
  }
  // smallest v >= -cap with v = residue (mod q)
  for (std::int64_t v = -cap + mod_floor(*residue + cap, q); v <= cap; v += q) out.push_back(v);
  return out;
}

void validate(const EnumSpec& spec) {
  if (spec.n == 0 || spec.n > 8) fail(Errc::InvalidArgument, "enumeration supports 1 <= n <= 8");
  if (spec.caps.size() != spec.n) fail(Errc::InvalidArgument, "need one cap per row");
  for (std::int64_t c : spec.caps)
    if (c < 0) fail(Errc::InvalidArgument, "caps must be non-negative");
  if (spec.q < 0) fail(Errc::InvalidArgument, "q must be non-negative");
  if (spec.q > 0 && spec.target) {
    if (spec.target->size() != spec.n * spec.n) fail(Errc::InvalidArgument, "target has wrong size");
    IntMatrix t(spec.n, spec.n);
    for (std::size_t i = 0; i < spec.n * spec.n; ++i) t(i / spec.n, i % spec.n) = (*spec.target)[i];
    if (mod_floor(det(t), Int(spec.q)) != mod_floor(Int(1), Int(spec.q))) {
      fail(Errc::InvalidArgument, "target is not in SL_n(Z/qZ)");
    }
  }
}

Plan make_plan(const EnumSpec& spec) {
  validate(spec);
  Plan p;
  p.n = spec.n;
  p.q = spec.q;
  p.constrained = spec.q > 0 && spec.target.has_value();
  if (p.constrained) {
    p.target.resize(spec.n * spec.n);
    for (std::size_t i = 0; i < p.target.size(); ++i) p.target[i] = mod_floor((*spec.target)[i], spec.q);
  }
  p.choices.resize(spec.n * spec.n);
  for (std::size_t k = 0; k < p.choices.size(); ++k) {
    std::optional<std::int64_t> residue;
    if (p.constrained) residue = p.target[k];
    p.choices[k] = entry_choices(spec.caps[k / spec.n], spec.q, residue);
  }
  return p;
}

std::uint64_t saturating_product(const Plan& plan, std::size_t entries) {
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < entries; ++k) {
    const std::uint64_t s = plan.choices[k].size();
    if (s == 0) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / s) return std::numeric_limits<std::uint64_t>::max();
    total *= s;
  }
  return total;
}

void check_budget(std::uint64_t space, std::uint64_t budget) {
  if (space > budget) {
    fail(Errc::BudgetExceeded, "candidate space " + std::to_string(space) + " exceeds budget " +
                                   std::to_string(budget));
  }
}

// Depth-first walk over all entries but the last; the last is solved from
// det = <last row, cofactors of the top block>.
template <class Sink>
class Kernel {
 public:
  Kernel(const Plan& plan, Sink& sink) : plan_(plan), sink_(sink), m_(plan.n * plan.n), cof_(plan.n) {}

  void run_all() {
    if (plan_.n == 1) {
      cof_[0] = 1;
      solve(0);
      return;
    }
    for (std::size_t i = 0; i < plan_.choices[0].size(); ++i) run_first(i);
  }

  void run_first(std::size_t index) {
    m_[0] = plan_.choices[0][index];
    descend(1, 0);
  }

 private:
  void compute_cofactors() {
    const std::size_t n = plan_.n;
    const std::uint32_t full = (1u << n) - 1;
    for (std::size_t j = 0; j < n; ++j) {
      const i128 minor = det_small(m_.data(), n, full & ~(1u << j), 0, n - 1);
      cof_[j] = ((n + 1 + j) % 2 == 0) ? minor : -minor;
    }
  }

  void descend(std::size_t k, i128 partial) {
    const std::size_t n = plan_.n;
    const std::size_t last_row = (n - 1) * n;
    if (k == last_row) compute_cofactors();
    if (k == n * n - 1) {
      solve(partial);
      return;
    }
    const bool in_last_row = k >= last_row;
    for (std::int64_t v : plan_.choices[k]) {
      m_[k] = v;
      descend(k + 1, in_last_row ? partial + cof_[k - last_row] * v : partial);
    }
  }

  void solve(i128 partial) {
    const std::size_t n = plan_.n;
    const std::size_t last = n * n - 1;
    const i128 c = cof_[n - 1];
    const i128 rem = 1 - partial;
    if (c != 0) {
      if (rem % c != 0) return;
      const i128 v = rem / c;
      const auto& opts = plan_.choices[last];
      if (opts.empty() || v < opts.front() || v > opts.back()) return;
      if (plan_.constrained && mod_floor(static_cast<std::int64_t>(v) - plan_.target[last], plan_.q) != 0) return;
      m_[last] = static_cast<std::int64_t>(v);
      sink_.hit(m_.data());
    } else if (rem == 0) {
      for (std::int64_t v : plan_.choices[last]) {
        m_[last] = v;
        sink_.hit(m_.data());
      }
    }
  }

  const Plan& plan_;
  Sink& sink_;
  std::vector<std::int64_t> m_;
  std::vector<i128> cof_;
};

// Splits the first entry's candidates across OpenMP threads; one sink per
// thread, merged in thread order.
template <class Sink>
Sink run_kernel(const Plan& plan, const Sink& proto, bool parallel) {
  if (plan.n == 1 || !parallel) {
    Sink sink = proto;
    Kernel<Sink>(plan, sink).run_all();
    return sink;
  }
  int threads = 1;
#if defined(_OPENMP)
  threads = omp_get_max_threads();
#endif
  std::vector<Sink> sinks(static_cast<std::size_t>(threads), proto);
  const auto first = static_cast<std::int64_t>(plan.choices[0].size());
#if defined(_OPENMP)
#pragma omp parallel num_threads(threads)
#endif
  {
    int tid = 0;
#if defined(_OPENMP)
    tid = omp_get_thread_num();
#endif
    Kernel<Sink> kernel(plan, sinks[static_cast<std::size_t>(tid)]);
#if defined(_OPENMP)
#pragma omp for schedule(dynamic, 1)
#endif
    for (std::int64_t i = 0; i < first; ++i) kernel.run_first(static_cast<std::size_t>(i));
  }
  Sink out = proto;
  for (const Sink& s : sinks) out.merge(s);
  return out;
}

struct CountSink {
  std::uint64_t count = 0;
  void hit(const std::int64_t*) { ++count; }
  void merge(const CountSink& o) { count += o.count; }
};

struct HistogramSink {
  std::size_t entries = 0;
  std::vector<std::uint64_t> bins;
  void hit(const std::int64_t* m) {
    std::int64_t norm = 0;
    for (std::size_t k = 0; k < entries; ++k) norm = std::max(norm, abs64(m[k]));
    ++bins[static_cast<std::size_t>(norm)];
  }
  void merge(const HistogramSink& o) {
    for (std::size_t i = 0; i < bins.size(); ++i) bins[i] += o.bins[i];
  }
};

struct MinSink {
  std::size_t entries = 0;
  std::int64_t best_norm = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> best;
  void hit(const std::int64_t* m) {
    std::int64_t norm = 0;
    for (std::size_t k = 0; k < entries; ++k) norm = std::max(norm, abs64(m[k]));
    if (norm > best_norm) return;
    if (norm == best_norm && !std::lexicographical_compare(m, m + entries, best.begin(), best.end())) return;
    best_norm = norm;
    best.assign(m, m + entries);
  }
  void merge(const MinSink& o) {
    if (o.best.empty()) return;
    hit(o.best.data());
  }
};

struct CallbackSink {
  std::size_t entries = 0;
  const std::function<bool(std::span<const std::int64_t>)>* visit = nullptr;
  bool stopped = false;
  void hit(const std::int64_t* m) {
    if (stopped) return;
    if (!(*visit)(std::span<const std::int64_t>(m, entries))) stopped = true;
  }
  void merge(const CallbackSink&) {}
};

}  // namespace

std::uint64_t default_budget() {
  if (const char* env = std::getenv("SLLIFT_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

EnumSpec EnumSpec::uniform(std::size_t n, std::int64_t cap) {
  EnumSpec s;
  s.n = n;
  s.caps.assign(n, cap);
  return s;
}

EnumSpec EnumSpec::skewed(std::size_t n, std::int64_t cap) {
  EnumSpec s = uniform(n, cap);
  s.caps.back() = cap * cap;
  return s;
}

EnumSpec EnumSpec::lifts_of(const IntMatrix& x, std::int64_t q, std::int64_t cap) {
  if (!x.square()) fail(Errc::NotSquare, "lift target must be square");
  if (q < 1) fail(Errc::InvalidArgument, "q must be positive");
  EnumSpec s = uniform(x.rows(), cap);
  s.q = q;
  std::vector<std::int64_t> t;
  for (const Int& v : x.entries()) t.push_back(static_cast<std::int64_t>(mod_floor(v, Int(q))));
  s.target = std::move(t);
  return s;
}

std::uint64_t candidate_space(const EnumSpec& spec) {
  const Plan plan = make_plan(spec);
  return saturating_product(plan, plan.n * plan.n - 1);
}

std::uint64_t count_sl(const EnumSpec& spec, const OracleOptions& opts) {
  const Plan plan = make_plan(spec);
  check_budget(saturating_product(plan, plan.n * plan.n - 1), opts.budget);
  return run_kernel(plan, CountSink{}, opts.parallel).count;
}

std::uint64_t count_sl_reference(const EnumSpec& spec, const OracleOptions& opts) {
  const Plan plan = make_plan(spec);
  const std::size_t entries = plan.n * plan.n;
  check_budget(saturating_product(plan, entries), opts.budget);
  if (saturating_product(plan, entries) == 0) return 0;
  std::vector<std::size_t> idx(entries, 0);
  std::vector<std::int64_t> m(entries);
  const std::uint32_t full = (1u << plan.n) - 1;
  std::uint64_t count = 0;
  while (true) {
    for (std::size_t k = 0; k < entries; ++k) m[k] = plan.choices[k][idx[k]];
    if (det_small(m.data(), plan.n, full, 0, plan.n) == 1) ++count;
    std::size_t k = entries;
    while (k > 0) {
      --k;
      if (++idx[k] < plan.choices[k].size()) break;
      idx[k] = 0;
      if (k == 0) return count;
    }
  }
}

void for_each_sl(const EnumSpec& spec, const std::function<bool(std::span<const std::int64_t>)>& visit,
                 const OracleOptions& opts) {
  const Plan plan = make_plan(spec);
  check_budget(saturating_product(plan, plan.n * plan.n - 1), opts.budget);
  CallbackSink sink{plan.n * plan.n, &visit, false};
  Kernel<CallbackSink> kernel(plan, sink);
  if (plan.n == 1) {
    kernel.run_all();
    return;
  }
  for (std::size_t i = 0; i < plan.choices[0].size() && !sink.stopped; ++i) kernel.run_first(i);
}

std::vector<std::uint64_t> norm_histogram(std::size_t n, std::int64_t t_max, const OracleOptions& opts) {
  if (t_max < 0) fail(Errc::InvalidArgument, "t_max must be non-negative");
  const Plan plan = make_plan(EnumSpec::uniform(n, t_max));
  check_budget(saturating_product(plan, n * n - 1), opts.budget);
  HistogramSink proto{n * n, std::vector<std::uint64_t>(static_cast<std::size_t>(t_max) + 1, 0)};
  return run_kernel(plan, proto, opts.parallel).bins;
}

std::vector<DrsRow> drs_table(std::size_t n, std::span<const std::int64_t> t_list, const OracleOptions& opts) {
  if (t_list.empty()) return {};
  const std::int64_t t_max = *std::max_element(t_list.begin(), t_list.end());
  const auto hist = norm_histogram(n, t_max, opts);
  std::vector<std::uint64_t> cumulative(hist.size());
  std::uint64_t run = 0;
  for (std::size_t i = 0; i < hist.size(); ++i) cumulative[i] = (run += hist[i]);
  std::vector<DrsRow> rows;
  const double exponent = static_cast<double>(n * n - n);
  for (std::int64_t t : t_list) {
    DrsRow r;
    r.t = t;
    r.count = cumulative[static_cast<std::size_t>(t)];
    if (t > 0) r.ratio = static_cast<double>(r.count) / std::pow(static_cast<double>(t), exponent);
    rows.push_back(r);
  }
  return rows;
}

std::vector<std::int64_t> achievable_norms(const IntMatrix& x, std::int64_t q, std::int64_t t_max) {
  std::set<std::int64_t> residues;
  for (const Int& v : x.entries()) residues.insert(static_cast<std::int64_t>(mod_floor(v, Int(q))));
  std::set<std::int64_t> values;
  for (std::int64_t r : residues) {
    for (std::int64_t v = r; v <= t_max; v += q) values.insert(v);
    for (std::int64_t v = q - r; v <= t_max; v += q) values.insert(v);
  }
  return {values.begin(), values.end()};
}

MinLift min_lift_norm(const IntMatrix& x, std::int64_t q, std::int64_t t_max, const OracleOptions& opts) {
  if (!x.square()) fail(Errc::NotSquare, "lift target must be square");
  if (q < 1) fail(Errc::InvalidArgument, "q must be positive");
  const std::size_t n = x.rows();
  const IntMatrix xr = reduce_mod(x, Int(q));
  if (mod_floor(det(xr), Int(q)) != mod_floor(Int(1), Int(q))) {
    fail(Errc::InvalidInput, "x is not in SL_n(Z/qZ)");
  }
  MinLift result;
  const auto ladder = achievable_norms(xr, q, t_max);
  if (ladder.empty()) return result;

  // Every lift has max-norm at least the largest signed residue.
  std::int64_t floor_norm = 1;
  for (const Int& v : xr.entries()) {
    const std::int64_t r = static_cast<std::int64_t>(v);
    floor_norm = std::max(floor_norm, std::min(r, q - r));
  }
  auto it = std::lower_bound(ladder.begin(), ladder.end(), floor_norm);
  if (it == ladder.end()) return result;
  std::int64_t cap = *it;
  const std::int64_t top = ladder.back();

  while (true) {
    const EnumSpec spec = EnumSpec::lifts_of(xr, q, cap);
    const Plan plan = make_plan(spec);
    check_budget(saturating_product(plan, n * n - 1), opts.budget);
    const MinSink found = run_kernel(plan, MinSink{n * n, std::numeric_limits<std::int64_t>::max(), {}}, opts.parallel);
    result.scanned_to = cap;
    if (!found.best.empty()) {
      result.norm = found.best_norm;
      IntMatrix w(n, n);
      for (std::size_t k = 0; k < n * n; ++k) w(k / n, k % n) = found.best[k];
      result.witness = std::move(w);
      return result;
    }
    if (cap >= top) return result;
    auto next = std::lower_bound(ladder.begin(), ladder.end(), 2 * cap);
    cap = next == ladder.end() ? top : *next;
  }
}

}  // namespace sllift
