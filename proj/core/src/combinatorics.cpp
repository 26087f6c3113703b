#include "wekac/combinatorics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "wekac/error.hpp"

namespace wekac {

namespace {

UInt128 checked_add(UInt128 a, UInt128 b) {
  UInt128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit integer overflow");
  return r;
}

UInt128 checked_mul(UInt128 a, UInt128 b) {
  UInt128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit integer overflow");
  return r;
}

double to_double(UInt128 v) { return static_cast<double>(v); }

}  // namespace

UInt128 binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  UInt128 r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i; split i between the two factors.
    const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(r % i), static_cast<std::uint64_t>(i));
    r = checked_mul(r / g, (n - k + i) / (i / g));
  }
  return r;
}

GaussianConstants gaussian_constants(unsigned m) {
  if (m < 1 || m > 170) throw CapacityError("gaussian_constants: m must lie in [1, 170]");
  GaussianConstants g;
  g.m = m;
  g.chi_m = m % 2 == 0 ? 1 : 0;
  if (m % 2 == 0) {
    double v;
    try {
      v = to_double(pairing_count(m));
    } catch (const OverflowError&) {
      // (m-1)!! = exp(lgamma(m+1) - (m/2) log 2 - lgamma(m/2+1))
      v = std::exp(std::lgamma(m + 1.0) - 0.5 * m * std::log(2.0) - std::lgamma(0.5 * m + 1.0));
    }
    g.mu_m = v;
    g.C_m = v;
    return g;
  }
  g.mu_m = 0.0;
  if (m <= 30) {
    // Gamma(k + 1/2) with k = (m+1)/2 is (k-1/2)(k-3/2)...(1/2) sqrt(pi).
    const unsigned k = (m + 1) / 2;
    double gamma = std::sqrt(M_PI);
    for (unsigned i = 0; i < k; ++i) gamma *= (i + 0.5);
    double fact = 1.0;
    for (unsigned i = 2; i <= m; ++i) fact *= i;
    g.C_m = fact / (std::pow(2.0, 0.5 * m) * gamma);
  } else {
    g.C_m = std::exp(std::lgamma(m + 1.0) - 0.5 * m * std::log(2.0) - std::lgamma(0.5 * m + 1.0));
  }
  return g;
}

UInt128 pairing_count(unsigned m) {
  if (m == 0 || m % 2 != 0) throw DomainError("pairing_count requires a positive even m");
  if (m > 170) throw CapacityError("pairing_count: m exceeds 170");
  UInt128 r = 1;
  for (unsigned i = m - 1; i >= 1; i -= 2) {
    r = checked_mul(r, i);
    if (i == 1) break;
  }
  return r;
}

UInt128 stirling2(unsigned n, unsigned k) {
  if (n > 64) throw CapacityError("stirling2: n exceeds 64");
  if (k > n) return 0;
  std::vector<UInt128> row(k + 1, 0);
  row[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    for (unsigned j = std::min(i, k); j >= 1; --j)
      row[j] = checked_add(checked_mul(j, row[j]), row[j - 1]);
    row[0] = 0;
  }
  return row[k];
}

std::vector<UInt128> touchard_coefficients(unsigned n) {
  if (n > 64) throw CapacityError("touchard: n exceeds 64");
  std::vector<std::vector<UInt128>> T;
  T.push_back({1});
  for (unsigned m = 0; m < n; ++m) {
    std::vector<UInt128> next(m + 2, 0);
    for (unsigned i = 0; i <= m; ++i) {
      const UInt128 c = binomial(m, i);
      for (std::size_t k = 0; k < T[i].size(); ++k)
        next[k + 1] = checked_add(next[k + 1], checked_mul(c, T[i][k]));
    }
    T.push_back(std::move(next));
  }
  return T[n];
}

double touchard(unsigned n, double t) {
  const auto c = touchard_coefficients(n);
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + to_double(c[k]);
  return acc;
}

UInt128 eulerian(unsigned l, unsigned j) {
  if (l > 20) throw CapacityError("eulerian: l exceeds 20");
  if (l == 0) return j == 0 ? 1 : 0;
  if (j >= l) return 0;
  // <l, j> = sum_{i=0}^{j} (-1)^i C(l+1, i) (j+1-i)^l
  Int128 acc = 0;
  for (unsigned i = 0; i <= j; ++i) {
    Int128 term = static_cast<Int128>(binomial(l + 1, i));
    for (unsigned e = 0; e < l; ++e) term *= static_cast<Int128>(j + 1 - i);
    acc += (i % 2 == 0) ? term : -term;
  }
  return static_cast<UInt128>(acc);
}

double eulerian_poly(unsigned l, double z) {
  if (l == 0) return 1.0;
  double acc = 0.0;
  for (unsigned j = l; j-- > 0;) acc = acc * z + to_double(eulerian(l, j));
  return acc;
}

double polylog_neg(unsigned l, double z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("polylog_neg requires |z| < 1");
  return z * eulerian_poly(l, z) / std::pow(1.0 - z, l + 1.0);
}

double polylog_neg_series(unsigned l, double z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("polylog_neg requires |z| < 1");
  // Quad precision: for z near -1 the alternating terms reach ~1e10 while the
  // sum is O(1), which double or long double cannot resolve to 1e-10.
  __extension__ typedef __float128 Quad;
  Quad sum = 0, zn = 1;
  for (std::uint64_t n = 1; n < 100000000; ++n) {
    zn *= z;
    Quad nl = 1;
    for (unsigned i = 0; i < l; ++i) nl *= static_cast<Quad>(n);
    const Quad term = nl * zn;
    sum += term;
    const Quad mag = term < 0 ? -term : term;
    const Quad smag = sum < 0 ? -sum : sum;
    if (n > l + 10 && mag < static_cast<Quad>(1e-22) * smag) break;
  }
  return static_cast<double>(sum);
}

UInt128 multinomial(const std::vector<unsigned>& parts) {
  unsigned total = 0;
  for (auto p : parts) total += p;
  if (total > 170) throw CapacityError("multinomial: total exceeds 170");
  UInt128 r = 1;
  unsigned running = 0;
  for (auto p : parts) {
    running += p;
    r = checked_mul(r, binomial(running, p));
  }
  return r;
}

}  // namespace wekac
