#include "sllift/hardness.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sllift {

RootWitness make_witness(std::int64_t modulus, std::uint64_t n, std::int64_t alpha, std::int64_t beta) {
  RootWitness w;
  w.modulus = modulus;
  w.n = n;
  w.alpha = Residue(alpha, modulus);
  w.beta = Residue(beta, modulus);
  if (pow_mod(w.beta.value(), n, modulus) != w.alpha.value()) {
    throw std::logic_error("make_witness: beta^n != alpha");
  }
  w.abs_alpha = abs_value(w.alpha);
  w.abs_n_beta = abs_value(Residue(mul_mod(static_cast<std::int64_t>(n % static_cast<std::uint64_t>(modulus)),
                                           w.beta.value(), modulus),
                                   modulus));
  w.degenerate = (n == 1);
  return w;
}

std::vector<std::int64_t> alpha_candidates(std::int64_t budget) {
  std::vector<std::int64_t> out;
  for (std::int64_t a = 1; a <= budget; ++a) {
    out.push_back(a);
    out.push_back(-a);
  }
  return out;
}

RootWitness find_large_root(std::int64_t q, std::uint64_t n, std::int64_t alpha_budget, std::int64_t target,
                            const RootSearchOptions& opts) {
  if (q < 1 || alpha_budget < 1) fail(Errc::InvalidArgument, "find_large_root needs q >= 1 and budget >= 1");
  if (n == 0) fail(Errc::InvalidArgument, "root order must be positive");
  const Factorization fq = factorize(q);
  std::optional<RootWitness> best;
  std::set<std::int64_t> seen;
  std::size_t rank = 0;
  for (std::int64_t a : alpha_candidates(alpha_budget)) {
    const Residue alpha(a, q);
    if (!seen.insert(alpha.value()).second) continue;
    if (std::gcd(alpha.value(), q) != 1) continue;
    const std::size_t this_rank = rank++;
    std::vector<Residue> roots;
    try {
      roots = nth_roots(alpha, n, fq, opts.roots);
    } catch (const Error& e) {
      if (e.code() != Errc::TooManyRoots || !opts.skip_oversized) throw;
      std::cerr << "warning: skipping alpha = " << a << " modulo " << q << ": " << e.what() << '\n';
      continue;
    }
    for (const Residue& b : roots) {
      RootWitness w = make_witness(q, n, alpha.value(), b.value());
      w.alpha_rank = this_rank;
      if (!best || w.abs_n_beta > best->abs_n_beta) best = w;
    }
    if (best && target > 0 && best->abs_n_beta >= target) {
      best->reached_target = true;
      break;
    }
  }
  if (!best) fail(Errc::NoUnitAlpha, "no admissible alpha with |alpha| <= " + std::to_string(alpha_budget));
  return *best;
}

std::optional<RootWitness> small_P_factor_root(std::int64_t q, std::uint64_t n, unsigned k) {
  if (q < 2 || n == 0 || k == 0) return std::nullopt;
  std::optional<RootWitness> best;
  for (const PrimePower& pp : factorize(q)) {
    const std::int64_t p = pp.prime;
    if (std::gcd(static_cast<std::uint64_t>(p - 1), n) <= 1) continue;
    if (n % static_cast<std::uint64_t>(p) == 0) continue;
    const std::int64_t pm = prime_power_value(pp);
    // p^m < q^{1/k}  <=>  (p^m)^k < q
    boost::multiprecision::cpp_int lhs = boost::multiprecision::pow(Int(pm), k);
    if (lhs >= q) continue;
    const std::int64_t rest = q / pm;
    for (std::int64_t a : nth_roots_prime_power(1, n, pp)) {
      if (a == 1) continue;
      const std::pair<std::int64_t, std::int64_t> parts[] = {{1, rest}, {a, pm}};
      const Residue beta = crt(parts);
      RootWitness w = make_witness(q, n, 1, beta.value());
      w.source = "small_P_factor";
      if (!best || w.abs_n_beta > best->abs_n_beta) best = w;
    }
  }
  return best;
}

bool is_rational_nth_power_ratio(const Int& a, const Int& b, unsigned n) {
  if (a <= 0 || b <= 0) fail(Errc::InvalidArgument, "ratio test expects positive integers");
  // a / b = (a b^{n-1}) / b^n
  return exact_nth_root(a * boost::multiprecision::pow(b, n - 1), n).has_value();
}

std::vector<PowerPair> small_nth_powers(std::int64_t q, std::uint64_t n, std::size_t count,
                                        const SmallPowersOptions& opts) {
  if (q < 1 || n == 0) fail(Errc::InvalidArgument, "small_nth_powers needs q >= 1 and n >= 1");
  const Factorization fq = factorize(q);
  std::vector<std::int64_t> reps;
  std::vector<PowerPair> out;
  std::size_t used = 0;
  for (std::int64_t p = 2; out.size() < count; ++p) {
    if (!is_prime(p) || q % p == 0) continue;
    if (used++ >= opts.prime_budget) {
      fail(Errc::SieveExhausted, "found " + std::to_string(out.size()) + " of " + std::to_string(count) +
                                     " pairs within " + std::to_string(opts.prime_budget) + " primes");
    }
    // p and r lie in the same class of (Z/q)^x / (Z/q)^{x n} iff p r^{n-1} is an n-th power.
    std::optional<std::int64_t> match;
    for (std::int64_t r : reps) {
      const Residue cand(mul_mod(p % q, pow_mod(r, n - 1, q), q), q);
      if (is_nth_power_residue(cand, n, fq)) {
        match = r;
        break;
      }
    }
    const bool new_class = !match;
    if (new_class) {
      reps.push_back(p);
      match = p;
    }
    const Int alpha_int = Int(p) * boost::multiprecision::pow(Int(*match), static_cast<unsigned>(n - 1));
    bool independent = true;
    for (const PowerPair& prev : out) {
      if (is_rational_nth_power_ratio(alpha_int, prev.alpha_integer, static_cast<unsigned>(n))) {
        independent = false;
        break;
      }
    }
    if (!independent) continue;
    const Residue alpha(static_cast<std::int64_t>(mod_floor(alpha_int, Int(q))), q);
    Residue beta;
    if (new_class) {
      beta = Residue(p, q);
    } else {
      beta = nth_roots(alpha, n, fq).front();
    }
    out.push_back(PowerPair{alpha_int, alpha, beta, p, *match});
  }
  return out;
}

Int HardInstance::lower_bound_ceil() const {
  return (lower_bound_num + lower_bound_den - 1) / lower_bound_den;
}

double HardInstance::lower_bound() const {
  return lower_bound_num.convert_to<double>() / lower_bound_den.convert_to<double>();
}

namespace {

HardInstance build_diagonal(std::int64_t q, std::size_t n, const RootWitness& w) {
  HardInstance h;
  h.q = q;
  h.n = n;
  h.witness = w;
  const std::int64_t q2 = w.modulus;
  const std::int64_t first = mul_mod(w.beta.value(), inv_mod(w.alpha.value(), q2), q2);
  h.x = IntMatrix(n, n);
  h.x(0, 0) = first % q;
  for (std::size_t i = 1; i < n; ++i) h.x(i, i) = w.beta.value() % q;
  h.lower_bound_num = w.abs_n_beta;
  h.lower_bound_den = Int(static_cast<std::int64_t>(n)) * std::max<std::int64_t>(1, w.abs_alpha);
  return h;
}

}  // namespace

HardInstance hard_instance(std::int64_t q, std::uint64_t n, std::int64_t alpha_budget,
                           const RootSearchOptions& opts) {
  if (q < 2) fail(Errc::InvalidArgument, "hard_instance needs q >= 2");
  if (q > (std::int64_t{1} << 31)) fail(Errc::Overflow, "q^2 exceeds the residue range");
  const std::int64_t q2 = q * q;
  const std::size_t dim = static_cast<std::size_t>(n);
  HardInstance best = build_diagonal(q, dim, find_large_root(q2, n, alpha_budget, 0, opts));
  if (auto alt = small_P_factor_root(q2, n, 2)) {
    HardInstance cand = build_diagonal(q, dim, *alt);
    // Strictly larger |n b| / (n |a|) wins.
    if (cand.lower_bound_num * best.lower_bound_den > best.lower_bound_num * cand.lower_bound_den) best = cand;
  }
  return best;
}

HardInstance sarnak_instance(std::int64_t m) {
  if (m < 1) fail(Errc::InvalidArgument, "sarnak_instance needs m >= 1");
  const std::int64_t q = 8 * m;
  const std::int64_t q2 = q * q;
  const std::int64_t beta = 1 + 4 * m;
  RootWitness w = make_witness(q2, 2, mul_mod(beta, beta, q2), beta);
  w.source = "sarnak";
  HardInstance h = build_diagonal(q, 2, w);
  h.lower_bound_num = Int(q) * q;
  h.lower_bound_den = 8;
  h.trace_residue = Int(2 + 16 * m * m);
  h.trace_modulus = Int(q2);
  return h;
}

}  // namespace sllift
