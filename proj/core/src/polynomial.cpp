#include "wekac/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "wekac/error.hpp"

namespace wekac {

namespace {

using Poly = std::vector<std::uint64_t>;  // ascending, reduced mod p

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<UInt128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t reduce(std::int64_t c, std::uint64_t m) {
  const std::int64_t r = c % static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly reduce_poly(const PolySpec& g, std::uint64_t p) {
  Poly a(g.coeffs.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = reduce(g.coeffs[i], p);
  trim(a);
  return a;
}

// a mod b, b nonzero.
Poly poly_rem(Poly a, const Poly& b, std::uint64_t p) {
  const std::uint64_t inv_lead = powmod(b.back(), p - 2, p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = mulmod(a.back(), inv_lead, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = (a[shift + i] + p - mulmod(factor, b[i], p)) % p;
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  trim(r);
  return poly_rem(std::move(r), m, p);
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly derivative(const Poly& a, std::uint64_t p) {
  Poly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(mulmod(a[i], i % p, p));
  trim(d);
  return d;
}

// g(r) mod m for arbitrary m < 2^63.
std::uint64_t eval_mod(const PolySpec& g, std::uint64_t r, std::uint64_t m) {
  std::uint64_t acc = 0;
  for (auto it = g.coeffs.rbegin(); it != g.coeffs.rend(); ++it)
    acc = (mulmod(acc, r, m) + reduce(*it, m)) % m;
  return acc;
}

bool has_rational_root(const std::vector<std::int64_t>& c) {
  // Candidates +-u/v with u | c_0 and v | c_d.
  auto divisors = [](std::int64_t n) {
    std::vector<std::int64_t> out;
    const std::uint64_t a = static_cast<std::uint64_t>(n < 0 ? -n : n);
    for (std::uint64_t d = 1; d * d <= a; ++d)
      if (a % d == 0) {
        out.push_back(static_cast<std::int64_t>(d));
        if (d * d != a) out.push_back(static_cast<std::int64_t>(a / d));
      }
    return out;
  };
  const auto us = divisors(c.front());
  const auto vs = divisors(c.back());
  for (auto u : us)
    for (auto v : vs)
      for (int sign : {1, -1}) {
        // v^d g(su/v) = sum c_i (su)^i v^{d-i}
        Int128 exact = 0;
        bool overflow = false;
        const std::size_t d = c.size() - 1;
        for (std::size_t i = 0; i <= d; ++i) {
          Int128 term = c[i];
          for (std::size_t k = 0; k < i; ++k) overflow |= __builtin_mul_overflow(term, sign * u, &term);
          for (std::size_t k = i; k < d; ++k) overflow |= __builtin_mul_overflow(term, v, &term);
          overflow |= __builtin_add_overflow(exact, term, &exact);
        }
        if (!overflow && exact == 0) return true;
      }
  return false;
}

}  // namespace

PolySpec make_poly(std::vector<std::int64_t> coeffs, std::int64_t c_g) {
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.size() < 2) throw DomainError("polynomial must be nonconstant");
  if (coeffs.front() == 0) throw DomainError("polynomial must satisfy g(0) != 0");
  if (c_g < 1) throw DomainError("c_g must be a positive integer");
  if (coeffs.size() <= 4 && coeffs.size() >= 3 && has_rational_root(coeffs))
    throw DomainError("polynomial is reducible over the rationals");
  return PolySpec{std::move(coeffs), c_g};
}

Int128 poly_value(const PolySpec& g, std::uint64_t n) {
  Int128 acc = 0;
  const Int128 x = static_cast<Int128>(n);
  for (auto it = g.coeffs.rbegin(); it != g.coeffs.rend(); ++it) {
    if (__builtin_mul_overflow(acc, x, &acc) || __builtin_add_overflow(acc, *it, &acc))
      throw CapacityError("polynomial value overflows 128 bits at n=" + std::to_string(n));
  }
  return acc;
}

std::uint64_t count_roots_mod_prime(const PolySpec& g, std::uint64_t p) {
  if (g.c_g % static_cast<std::int64_t>(p) == 0) return 0;
  const Poly a = reduce_poly(g, p);
  if (a.empty()) return p;
  if (a.size() == 1) return 0;
  if (p <= 64) {
    std::uint64_t count = 0;
    for (std::uint64_t r = 0; r < p; ++r) count += eval_mod(g, r, p) == 0;
    return count;
  }
  // deg gcd(g, x^p - x) counts distinct roots in F_p.
  Poly result{1};
  Poly base = poly_rem(Poly{0, 1}, a, p);
  for (std::uint64_t e = p; e; e >>= 1) {
    if (e & 1) result = poly_mulmod(result, base, a, p);
    base = poly_mulmod(base, base, a, p);
  }
  result.resize(std::max<std::size_t>(result.size(), 2), 0);
  result[1] = (result[1] + p - 1) % p;
  trim(result);
  if (result.empty()) return a.size() - 1;
  return poly_gcd(a, result, p).size() - 1;
}

std::uint64_t rho_g(const PolySpec& g, std::uint64_t p, std::uint32_t nu, std::uint64_t cap) {
  if (nu == 0) return 1;
  if (g.c_g % static_cast<std::int64_t>(p) == 0) return 0;
  const std::uint64_t base = count_roots_mod_prime(g, p);
  if (nu == 1 || base == 0) return base;
  const Poly a = reduce_poly(g, p);
  if (a.size() == g.coeffs.size() && poly_gcd(a, derivative(a, p), p).size() == 1) return base;

  std::vector<std::uint64_t> roots;
  for (std::uint64_t r = 0; r < p; ++r)
    if (eval_mod(g, r, p) == 0) roots.push_back(r);
  std::uint64_t pk = p;
  for (std::uint32_t k = 1; k < nu && !roots.empty(); ++k) {
    // The cap bounds the lifting work, not the modulus: root sets usually die out or stay small.
    std::uint64_t next, work;
    if (__builtin_mul_overflow(pk, p, &next) || __builtin_mul_overflow(roots.size(), p, &work) ||
        work > cap)
      throw CapacityError("rho_g: lifting to " + std::to_string(p) + "^" + std::to_string(k + 1) +
                          " exceeds enumeration cap " + std::to_string(cap));
    std::vector<std::uint64_t> lifted;
    for (auto r : roots)
      for (std::uint64_t t = 0; t < p; ++t) {
        const std::uint64_t c = r + t * pk;
        if (eval_mod(g, c, next) == 0) lifted.push_back(c);
      }
    roots = std::move(lifted);
    pk = next;
  }
  return roots.size();
}

std::uint64_t rho_g(const PolySpec& g, const Factorization& fac, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (const auto& [p, nu] : fac) {
    total *= rho_g(g, p, nu, cap);
    if (total == 0) break;
  }
  return total;
}

std::uint64_t rho_g_enumerate(const PolySpec& g, std::uint64_t n) {
  if (n == 1) return 1;
  if (std::gcd(static_cast<std::uint64_t>(g.c_g), n) > 1) return 0;
  std::uint64_t count = 0;
  for (std::uint64_t r = 0; r < n; ++r) count += eval_mod(g, r, n) == 0;
  return count;
}

namespace catalog {

WeightSpec rho_g(const PolySpec& g, const CatalogLimits& limits) {
  // Low bits: roots mod p. kLift: p needs lifting (not separable there); elsewhere rho(p^nu) = rho(p).
  constexpr std::uint16_t kLift = 0x8000;
  auto table = std::make_shared<std::vector<std::uint16_t>>(limits.limit + 1, 0);
  for (auto p : primes_up_to(limits.limit)) {
    const std::uint64_t roots = count_roots_mod_prime(g, p);
    if (roots >= kLift) {  // only if p divides every coefficient; computed on demand
      (*table)[p] = kLift;
      continue;
    }
    const auto base = static_cast<std::uint16_t>(roots);
    (*table)[p] = base;
    if (base == 0) continue;
    const Poly a = reduce_poly(g, p);
    if (a.size() != g.coeffs.size() || poly_gcd(a, derivative(a, p), p).size() != 1) (*table)[p] |= kLift;
  }
  const std::uint64_t limit = limits.limit;
  const std::uint64_t cap = limits.rho_cap;

  WeightSpec w;
  w.name = "rho_g";
  w.integer_rule = [g, table, limit, cap](std::uint64_t p, std::uint32_t nu) -> std::uint64_t {
    if (p <= limit) {
      const std::uint16_t e = (*table)[p];
      if (!(e & kLift)) return e;
      if (nu == 1 && e != kLift) return e & (kLift - 1);
    }
    return wekac::rho_g(g, p, nu, cap);
  };
  w.rule = [ir = w.integer_rule](std::uint64_t p, std::uint32_t nu) {
    return static_cast<double>(ir(p, nu));
  };
  w.local_factor = [g, table, limit, ir = w.integer_rule](std::uint64_t p) -> double {
    const std::uint64_t base = ir(p, 1);
    bool separable;
    if (p <= limit) {
      separable = !((*table)[p] & kLift);
    } else {
      const Poly a = reduce_poly(g, p);
      separable = base == 0 || (a.size() == g.coeffs.size() && poly_gcd(a, derivative(a, p), p).size() == 1);
    }
    if (separable) return 1.0 + static_cast<double>(base) / (static_cast<double>(p) - 1.0);
    double sum = 1.0;
    double pk = 1.0;
    for (std::uint32_t nu = 1; nu <= 64; ++nu) {
      pk *= static_cast<double>(p);
      std::uint64_t value;
      try {
        value = ir(p, nu);
      } catch (const CapacityError&) {
        // Beyond the cap the terms are below d_g p^{nu/2} / p^nu; stop.
        break;
      }
      sum += static_cast<double>(value) / pk;
    }
    return sum;
  };
  w.params.beta = 1.0;
  w.params.sigma0 = 1.0;
  w.params.theta0 = 0.0;
  w.params.rho0 = 0.0;
  w.params.r = 0.9;
  // Sampled over small prime powers, where any ramified primes live.
  double ci = 1.0;
  double civ = 0.0;
  for (auto p : primes_up_to(std::min<std::uint64_t>(limits.limit, 1000))) {
    double measure = 0.0;
    double pk = 1.0;
    for (std::uint32_t nu = 1; nu <= 8; ++nu) {
      pk *= static_cast<double>(p);
      if (pk > static_cast<double>(cap)) break;
      const double v = w.rule(p, nu);
      ci = std::max(ci, v);
      measure += nu * v / pk;
    }
    civ = std::max(civ, measure * static_cast<double>(p));
  }
  w.params.cond_i_constant = ci;
  w.params.cond_iv_constant = civ;
  w.params.cond_ii_constant = 1.0;
  w.params.verified = false;
  nlohmann::json coeffs = g.coeffs;
  w.description = {{"name", "rho_g"}, {"g", coeffs}, {"c_g", g.c_g}};
  return w;
}

}  // namespace catalog

}  // namespace wekac
