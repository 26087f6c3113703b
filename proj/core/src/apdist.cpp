#include "wekac/apdist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wekac/combinatorics.hpp"
#include "wekac/error.hpp"
#include "wekac/moments.hpp"

namespace wekac {

namespace {

std::uint64_t euler_phi_of(const Factorization& q) {
  std::uint64_t v = 1;
  for (const auto& [p, nu] : q) {
    v *= p - 1;
    for (std::uint32_t k = 1; k < nu; ++k) v *= p;
  }
  return v;
}

void require_large_primes(const PolySpec& g, const Factorization& q, std::uint64_t Q0) {
  const std::uint64_t g0 = static_cast<std::uint64_t>(std::abs(g.constant_term()));
  if (!(Q0 > static_cast<std::uint64_t>(g.c_g) * g0))
    throw DomainError("need Q0 > c_g |g(0)|");
  for (const auto& pp : q)
    if (pp.p <= Q0) throw DomainError("every prime factor of q must exceed Q0");
}

// F~(sigma0, p) = rho_g(p)/(p-1) * (1 - F(sigma0, p)).
double f_tilde_prime(const LocalFactorTable& lft, const PolySpec& g, std::uint64_t p) {
  return static_cast<double>(count_roots_mod_prime(g, p)) / (static_cast<double>(p) - 1.0) *
         (1.0 - lft(p).F_p);
}

}  // namespace

std::pair<double, double> afg_bfg(const AdditiveSpec& f, const PolySpec& g, std::uint64_t x,
                                  const SieveTable& table) {
  if (x < 2) throw DomainError("afg_bfg requires x >= 2");
  CompensatedSum a, b;
  for (auto p : table.primes_up_to(x)) {
    const double rho = static_cast<double>(count_roots_mod_prime(g, p));
    if (rho == 0.0) continue;
    const double fp = f.rule(p, 1);
    a.add(rho * fp / static_cast<double>(p));
    b.add(rho * fp * fp / static_cast<double>(p));
  }
  return {a.value(), b.value()};
}

Factorization factor_poly_value(const PolySpec& g, std::uint64_t n, const SieveTable& table) {
  const Int128 v = poly_value(g, n);
  if (v < 1) throw DomainError("g(n) must be a positive integer (n=" + std::to_string(n) + ")");
  if (v > static_cast<Int128>(UINT64_MAX)) throw CapacityError("g(n) exceeds 64 bits");
  const auto u = static_cast<std::uint64_t>(v);
  if (u <= table.limit()) return table.factorize(u);
  return trial_factorize(u, table);
}

std::vector<ApMomentReport> moment_fg(const WeightSpec& w, const AdditiveSpec& f, const PolySpec& g,
                                      std::uint64_t x, const std::vector<unsigned>& orders,
                                      const SieveTable& table, const ExecContext& ctx) {
  if (x < 2) throw DomainError("moment_fg requires x >= 2");
  if (x > table.limit()) throw DomainError("x exceeds the sieve limit");
  unsigned max_m = 0;
  for (auto m : orders) {
    if (m > kMaxMomentOrder) throw DomainError("moment order exceeds " + std::to_string(kMaxMomentOrder));
    max_m = std::max(max_m, m);
  }
  const auto [A, B] = afg_bfg(f, g, x, table);
  // Fail early, before the scan, if the largest value cannot be factored.
  factor_poly_value(g, x, table);

  using Acc = std::vector<double>;
  const Acc acc = chunked_reduce<Acc>(
      1, x, ctx,
      [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<CompensatedSum> pw(max_m + 1);
        table.for_each_factorization(lo, hi, [&](std::uint64_t n, const Factorization& fac) {
          const double al = eval_weight(w, fac);
          if (al == 0.0) return;
          const double d = eval_additive(f, factor_poly_value(g, n, table)) - A;
          double term = al;
          pw[0].add(al);
          for (unsigned k = 1; k <= max_m; ++k) {
            term *= d;
            pw[k].add(term);
          }
        });
        Acc out(max_m + 1);
        for (unsigned k = 0; k <= max_m; ++k) out[k] = pw[k].value();
        return out;
      },
      [](Acc a, const Acc& b) {
        for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
        return a;
      },
      Acc(max_m + 1, 0.0));

  std::vector<ApMomentReport> out;
  for (auto m : orders) {
    ApMomentReport r;
    r.x = x;
    r.m = m;
    r.s_x = acc[0];
    r.a_fg = A;
    r.b_fg = B;
    r.m_fg = m == 0 ? 1.0 : acc[m] / acc[0];
    if (m == 0) {
      r.predicted = 1.0;
    } else {
      if (!(B > 0.0)) throw DegenerateVarianceError("B_fg(x) is not positive");
      r.predicted = predicted_moment(m, B);
      r.normalized_residual =
          (r.m_fg - r.predicted) / (gaussian_constants(m).C_m * std::pow(B, 0.5 * (m - 1.0)));
    }
    out.push_back(r);
  }
  return out;
}

DiscrepancyReport discrepancy_report(const WeightSpec& w, std::uint64_t x, std::uint64_t q,
                                     const SieveTable& table, const ExecContext& ctx) {
  if (q == 0) throw DomainError("modulus must be positive");
  if (q > x) throw DomainError("modulus must not exceed x");
  if (x > table.limit()) throw DomainError("x exceeds the sieve limit");
  using Acc = std::vector<double>;
  const Acc sums = chunked_reduce<Acc>(
      1, x, ctx,
      [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<CompensatedSum> cls(q);
        table.for_each_factorization(lo, hi, [&](std::uint64_t n, const Factorization& fac) {
          if (std::gcd(n, q) != 1) return;
          cls[n % q].add(eval_weight(w, fac));
        });
        Acc out(q);
        for (std::uint64_t a = 0; a < q; ++a) out[a] = cls[a].value();
        return out;
      },
      [](Acc a, const Acc& b) {
        for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
        return a;
      },
      Acc(q, 0.0));

  DiscrepancyReport r;
  r.x = x;
  r.q = q;
  CompensatedSum coprime;
  for (auto v : sums) coprime.add(v);
  const double phi = static_cast<double>(euler_phi_of(trial_factorize(q)));
  r.normalizer = coprime.value() / phi;
  for (std::uint64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    const double d = q == 1 ? 0.0 : sums[a] - r.normalizer;
    r.residues.push_back(q == 1 ? 1 : a);
    r.deltas.push_back(d);
    r.max_abs = std::max(r.max_abs, std::abs(d));
  }
  return r;
}

double delta_ap(const WeightSpec& w, std::uint64_t x, std::uint64_t q, std::uint64_t a,
                const SieveTable& table, const ExecContext& ctx) {
  if (q == 0) throw DomainError("modulus must be positive");
  if (std::gcd(a, q) != 1) throw DomainError("delta_ap requires gcd(a, q) = 1");
  if (q == 1) return 0.0;
  const auto r = discrepancy_report(w, x, q, table, ctx);
  const auto it = std::find(r.residues.begin(), r.residues.end(), a % q);
  return r.deltas[it - r.residues.begin()];
}

ModifiedLocal modified_local(const LocalFactorTable& lft, const PolySpec& g, const Factorization& q,
                             std::uint64_t Q0) {
  require_large_primes(g, q, Q0);
  ModifiedLocal m;
  for (const auto& pp : q) m.F_bar *= 1.0 - lft(pp.p).F_p;
  m.F_tilde = static_cast<double>(rho_g(g, q)) / static_cast<double>(euler_phi_of(q)) * m.F_bar;
  return m;
}

double g_tilde1_closed(const AdditiveSpec& f, const LocalFactorTable& lft, const PolySpec& g,
                       const Factorization& q, std::uint64_t Q0) {
  require_large_primes(g, q, Q0);
  double v = 1.0;
  for (const auto& [p, nu] : q) {
    const double Ft = f_tilde_prime(lft, g, p);
    const double fp = f.rule(p, 1) / f.bound_M;
    const double sign = nu % 2 == 0 ? 1.0 : -1.0;
    v *= std::pow(fp, nu) * Ft * (1.0 - Ft) *
         (sign * std::pow(Ft, nu - 1.0) + std::pow(1.0 - Ft, nu - 1.0));
  }
  return v;
}

double g_tilde1_expand(const AdditiveSpec& f, const LocalFactorTable& lft, const PolySpec& g,
                       const Factorization& q, std::uint64_t Q0) {
  require_large_primes(g, q, Q0);
  const std::size_t k = q.size();
  if (k > 8) throw CapacityError("divisor-sum expansion limited to 8 distinct primes");
  std::vector<double> Ft(k), fa(k), fn(k);
  for (std::size_t i = 0; i < k; ++i) {
    Ft[i] = f_tilde_prime(lft, g, q[i].p);
    const double fp = f.rule(q[i].p, 1) / f.bound_M;
    fa[i] = std::pow(fp * (1.0 - Ft[i]), q[i].nu);
    fn[i] = std::pow(-fp * Ft[i], q[i].nu);
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 3;
  double sum = 0.0;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double term = 1.0;
    for (std::size_t i = 0; i < k; ++i, c /= 3) {
      switch (c % 3) {
        case 0: term *= fn[i]; break;
        case 1: term *= fa[i] * Ft[i]; break;
        case 2: term *= -fn[i] * Ft[i]; break;
      }
    }
    sum += term;
  }
  return sum;
}

}  // namespace wekac
