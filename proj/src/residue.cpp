#include "sllift/residue.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace sllift {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::NotUnit: return "NotUnit";
    case Errc::PrimeTooLarge: return "PrimeTooLarge";
    case Errc::FactorLimitExceeded: return "FactorLimitExceeded";
    case Errc::TooManyRoots: return "TooManyRoots";
    case Errc::Overflow: return "Overflow";
    case Errc::NotSquare: return "NotSquare";
    case Errc::BadShape: return "BadShape";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::DependentRows: return "DependentRows";
    case Errc::NotExtendable: return "NotExtendable";
    case Errc::NotExtendableModQ: return "NotExtendableModQ";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::NoUnitAlpha: return "NoUnitAlpha";
    case Errc::SieveExhausted: return "SieveExhausted";
    case Errc::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

namespace {

void check_modulus(std::int64_t m) {
  if (m < 1) fail(Errc::InvalidArgument, "modulus must be positive, got " + std::to_string(m));
  if (m > kMaxModulus) fail(Errc::Overflow, "modulus exceeds 2^62: " + std::to_string(m));
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Brent's variant of Pollard rho. Returns a nontrivial factor of composite n,
// or 0 when the effort budget runs out.
std::int64_t pollard_rho(std::int64_t n, std::uint64_t effort, std::uint64_t& state) {
  if (n % 2 == 0) return 2;
  const auto un = static_cast<std::uint64_t>(n);
  std::uint64_t spent = 0;
  while (spent < effort) {
    std::int64_t c = static_cast<std::int64_t>(splitmix64(state) % (un - 1)) + 1;
    std::int64_t y = static_cast<std::int64_t>(splitmix64(state) % un);
    std::int64_t g = 1, r = 1, q = 1, x = 0, ys = 0;
    const std::int64_t block = 128;
    auto f = [&](std::int64_t v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::int64_t i = 0; i < r; ++i) y = f(y);
      std::int64_t k = 0;
      do {
        ys = y;
        for (std::int64_t i = 0; i < std::min(block, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += block;
        spent += static_cast<std::uint64_t>(block);
      } while (k < r && g == 1 && spent < effort);
      r *= 2;
    } while (g == 1 && spent < effort);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

void factor_cofactor(std::int64_t n, const FactorOptions& opts, std::uint64_t& state,
                     std::vector<std::int64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::int64_t d = pollard_rho(n, opts.rho_effort, state);
  if (d == 0) fail(Errc::FactorLimitExceeded, "cofactor " + std::to_string(n) + " resisted factoring");
  factor_cofactor(d, opts, state, out);
  factor_cofactor(n / d, opts, state, out);
}

}  // namespace

Residue::Residue(std::int64_t a, std::int64_t m) : value_(0), modulus_(m) {
  check_modulus(m);
  value_ = mod_floor(a, m);
}

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  const __int128 p = static_cast<__int128>(a) * b % m;
  return static_cast<std::int64_t>(p < 0 ? p + m : p);
}

std::int64_t pow_mod(std::int64_t base, std::uint64_t exp, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t result = 1;
  base = mod_floor(base, m);
  while (exp > 0) {
    if (exp & 1u) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1u;
  }
  return result;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = mod_floor(a, m), r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t quot = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - quot * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - quot * s);
  }
  if (old_r != 1 && m != 1) {
    fail(Errc::NotUnit, std::to_string(a) + " is not invertible modulo " + std::to_string(m));
  }
  return mod_floor(old_s, m);
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::int64_t d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (std::int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::int64_t x = pow_mod(a, static_cast<std::uint64_t>(d), n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::int64_t prime_power_value(const PrimePower& pp) {
  std::int64_t v = 1;
  for (int i = 0; i < pp.exponent; ++i) v *= pp.prime;
  return v;
}

std::int64_t totient(const PrimePower& pp) {
  return prime_power_value(pp) / pp.prime * (pp.prime - 1);
}

std::int64_t signed_lift(const Residue& a) {
  const std::int64_t m = a.modulus();
  return a.value() > m / 2 ? a.value() - m : a.value();
}

std::int64_t abs_value(const Residue& a) {
  const std::int64_t r = signed_lift(a);
  return r < 0 ? -r : r;
}

Factorization factorize(std::int64_t m, const FactorOptions& opts) {
  if (m < 1) fail(Errc::InvalidArgument, "factorize expects m >= 1, got " + std::to_string(m));
  std::vector<std::int64_t> primes;
  std::int64_t rest = m;
  for (std::int64_t p = 2; p < opts.trial_bound && p * p <= rest; p += (p == 2 ? 1 : 2)) {
    while (rest % p == 0) {
      primes.push_back(p);
      rest /= p;
    }
  }
  if (rest > 1) {
    std::uint64_t state = opts.seed;
    factor_cofactor(rest, opts, state, primes);
  }
  std::sort(primes.begin(), primes.end());
  Factorization out;
  for (std::int64_t p : primes) {
    if (!out.empty() && out.back().prime == p) {
      ++out.back().exponent;
    } else {
      out.push_back({p, 1});
    }
  }
  return out;
}

Residue crt(std::span<const std::pair<std::int64_t, std::int64_t>> congruences) {
  std::int64_t value = 0, modulus = 1;
  for (const auto& [r, m] : congruences) {
    check_modulus(m);
    if (std::gcd(modulus, m) != 1) {
      fail(Errc::NotCoprime, "moduli " + std::to_string(modulus) + " and " + std::to_string(m) +
                                 " share a factor");
    }
    const __int128 prod = static_cast<__int128>(modulus) * m;
    if (prod > kMaxModulus) fail(Errc::Overflow, "CRT modulus exceeds 2^62");
    const std::int64_t rm = mod_floor(r, m);
    // value + modulus * t == rm (mod m)
    const std::int64_t t = mul_mod(mod_floor(rm - value, m), inv_mod(modulus % m, m), m);
    value = static_cast<std::int64_t>(value + static_cast<__int128>(modulus) * t);
    modulus = static_cast<std::int64_t>(prod);
  }
  return Residue(value, modulus);
}

std::vector<std::int64_t> nth_roots_prime_power(std::int64_t alpha, std::uint64_t n,
                                                const PrimePower& pp, const RootOptions& opts) {
  const std::int64_t p = pp.prime;
  if (p > opts.prime_bound) {
    fail(Errc::PrimeTooLarge, "prime " + std::to_string(p) + " exceeds root-extraction bound " +
                                  std::to_string(opts.prime_bound));
  }
  if (n == 0) fail(Errc::InvalidArgument, "root order must be positive");
  if (alpha % p == 0) fail(Errc::NotUnit, std::to_string(alpha) + " is divisible by " + std::to_string(p));

  std::vector<std::int64_t> level;
  const std::int64_t target_p = mod_floor(alpha, p);
  for (std::int64_t x = 1; x < p; ++x) {
    if (pow_mod(x, n, p) == target_p) level.push_back(x);
  }
  std::int64_t pj = p;
  for (int j = 1; j < pp.exponent && !level.empty(); ++j) {
    const std::int64_t next_mod = pj * p;
    const std::int64_t target = mod_floor(alpha, next_mod);
    std::vector<std::int64_t> next;
    for (std::int64_t r : level) {
      for (std::int64_t t = 0; t < p; ++t) {
        const std::int64_t c = r + t * pj;
        if (pow_mod(c, n, next_mod) == target) {
          next.push_back(c);
          if (next.size() > opts.max_roots) {
            fail(Errc::TooManyRoots, "more than " + std::to_string(opts.max_roots) + " roots modulo " +
                                         std::to_string(next_mod));
          }
        }
      }
    }
    level = std::move(next);
    pj = next_mod;
  }
  std::sort(level.begin(), level.end());
  return level;
}

std::vector<Residue> nth_roots(const Residue& alpha, std::uint64_t n, const RootOptions& opts) {
  return nth_roots(alpha, n, factorize(alpha.modulus()), opts);
}

std::vector<Residue> nth_roots(const Residue& alpha, std::uint64_t n, const Factorization& fm,
                               const RootOptions& opts) {
  const std::int64_t m = alpha.modulus();
  if (n == 0) fail(Errc::InvalidArgument, "root order must be positive");
  if (std::gcd(alpha.value(), m) != 1) {
    fail(Errc::NotUnit, std::to_string(alpha.value()) + " is not a unit modulo " + std::to_string(m));
  }
  for (const auto& pp : fm) {
    if (pp.prime > opts.prime_bound) {
      fail(Errc::PrimeTooLarge, "prime " + std::to_string(pp.prime) + " exceeds root-extraction bound");
    }
  }
  if (n == 1) return {alpha};

  std::vector<std::int64_t> acc{0};
  std::int64_t acc_mod = 1;
  for (const auto& pp : fm) {
    const std::int64_t pe = prime_power_value(pp);
    const auto local = nth_roots_prime_power(alpha.value() % pe, n, pp, opts);
    if (local.empty()) return {};
    if (acc.size() * local.size() > opts.max_roots) {
      fail(Errc::TooManyRoots, "root set modulo " + std::to_string(m) + " exceeds " +
                                   std::to_string(opts.max_roots));
    }
    const std::int64_t inv = inv_mod(acc_mod % pe, pe);
    std::vector<std::int64_t> next;
    next.reserve(acc.size() * local.size());
    for (std::int64_t a : acc) {
      for (std::int64_t b : local) {
        const std::int64_t t = mul_mod(mod_floor(b - a, pe), inv, pe);
        next.push_back(a + acc_mod * t);
      }
    }
    acc = std::move(next);
    acc_mod *= pe;
  }
  std::sort(acc.begin(), acc.end());
  std::vector<Residue> out;
  out.reserve(acc.size());
  for (std::int64_t v : acc) out.emplace_back(v, m);
  return out;
}

bool is_nth_power_residue(const Residue& a, std::uint64_t n) {
  return is_nth_power_residue(a, n, factorize(a.modulus()));
}

bool is_nth_power_residue(const Residue& a, std::uint64_t n, const Factorization& fm) {
  if (n == 0) fail(Errc::InvalidArgument, "root order must be positive");
  if (std::gcd(a.value(), a.modulus()) != 1) {
    fail(Errc::NotUnit, std::to_string(a.value()) + " is not a unit modulo " + std::to_string(a.modulus()));
  }
  for (const auto& pp : fm) {
    const std::int64_t pe = prime_power_value(pp);
    const std::int64_t local = a.value() % pe;
    if (pp.prime == 2) {
      RootOptions opts;
      opts.prime_bound = 2;
      if (nth_roots_prime_power(local, n, pp, opts).empty()) return false;
    } else {
      const std::int64_t phi = totient(pp);
      const auto g = std::gcd(static_cast<std::int64_t>(n % static_cast<std::uint64_t>(phi)), phi);
      if (pow_mod(local, static_cast<std::uint64_t>(phi / g), pe) != 1) return false;
    }
  }
  return true;
}

std::optional<Int> exact_nth_root(const Int& value, unsigned n) {
  if (value < 0 || n == 0) return std::nullopt;
  if (value < 2 || n == 1) return value;
  Int lo = 0;
  Int hi = Int(1) << (static_cast<unsigned>(boost::multiprecision::msb(value)) / n + 1);
  while (lo < hi) {
    Int mid = (lo + hi + 1) / 2;
    if (boost::multiprecision::pow(mid, n) <= value) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  if (boost::multiprecision::pow(lo, n) == value) return lo;
  return std::nullopt;
}

}  // namespace sllift
