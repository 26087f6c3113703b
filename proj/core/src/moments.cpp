#include "wekac/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "wekac/combinatorics.hpp"
#include "wekac/error.hpp"

namespace wekac {

namespace {

double prime_power_sigma(std::uint64_t p, double sigma0) {
  return std::pow(static_cast<double>(p), sigma0);
}

struct MomentAccumulator {
  double s = 0.0;
  double first = 0.0;  // sum alpha f
  std::array<double, kMaxMomentOrder + 1> powers{};
};

MomentAccumulator merge_moments(MomentAccumulator a, const MomentAccumulator& b) {
  a.s += b.s;
  a.first += b.first;
  for (std::size_t k = 0; k < a.powers.size(); ++k) a.powers[k] += b.powers[k];
  return a;
}

double require_positive_variance(double B) {
  if (!(B > 0.0)) throw DegenerateVarianceError("variance proxy B(x) is not positive");
  return B;
}

}  // namespace

TruncationClass TruncationSets::classify(double fp) const {
  const double a = std::abs(fp);
  if (a <= lower) return TruncationClass::kMinus;
  if (a <= upper) return TruncationClass::kPlus;
  return TruncationClass::kInfinity;
}

double partial_sum_S(const WeightSpec& w, std::uint64_t x, const SieveTable& table,
                     const ExecContext& ctx) {
  return coprime_sum_S(w, x, 1, table, ctx);
}

double coprime_sum_S(const WeightSpec& w, std::uint64_t x, std::uint64_t a,
                     const SieveTable& table, const ExecContext& ctx) {
  if (a == 0) throw DomainError("coprime_sum_S requires a >= 1");
  if (x > table.limit()) throw DomainError("x exceeds the sieve limit");
  if (x == 0) return 0.0;
  const double total = chunked_reduce<double>(
      1, x, ctx,
      [&](std::uint64_t lo, std::uint64_t hi) {
        CompensatedSum acc;
        table.for_each_factorization(lo, hi, [&](std::uint64_t n, const Factorization& fac) {
          if (a != 1 && std::gcd(n, a) != 1) return;
          acc.add(eval_weight(w, fac));
        });
        return acc.value();
      },
      [](double u, double v) { return u + v; }, 0.0);
  if (!std::isfinite(total)) throw OverflowError("weighted sum is not finite");
  return total;
}

double mean_A(const WeightSpec& w, const AdditiveSpec& f, std::uint64_t x, const SieveTable& table) {
  if (x < 2) throw DomainError("mean_A requires x >= 2");
  CompensatedSum acc;
  for (auto p : table.primes_up_to(x))
    acc.add(w.rule(p, 1) * f.rule(p, 1) / prime_power_sigma(p, w.params.sigma0));
  return acc.value();
}

double variance_B(const WeightSpec& w, const AdditiveSpec& f, std::uint64_t x,
                  const SieveTable& table) {
  if (x < 2) throw DomainError("variance_B requires x >= 2");
  CompensatedSum acc;
  for (auto p : table.primes_up_to(x)) {
    const double fp = f.rule(p, 1);
    acc.add(w.rule(p, 1) * fp * fp / prime_power_sigma(p, w.params.sigma0));
  }
  return acc.value();
}

double B_star(double B, double x, double beta) {
  if (beta == 1.0) return B;
  if (!(x > std::exp(std::exp(1.0))))
    throw DomainError("B* needs x > e^e so that logloglog x > 0");
  const double l3 = std::log(std::log(std::log(x)));
  return B / (l3 * l3);
}

double predicted_moment(unsigned m, double B) {
  if (m == 0) return 1.0;
  const auto g = gaussian_constants(m);
  return g.C_m * std::pow(B, 0.5 * m) * g.chi_m;
}

double phi_gaussian(double V) { return 0.5 * std::erfc(-V / std::sqrt(2.0)); }

std::vector<MomentReport> weighted_moments(const WeightSpec& w, const AdditiveSpec& f,
                                           std::uint64_t x, const std::vector<unsigned>& orders,
                                           const SieveTable& table, const ExecContext& ctx) {
  if (x < 2) throw DomainError("moments require x >= 2");
  if (x > table.limit()) throw DomainError("x exceeds the sieve limit");
  unsigned max_m = 0;
  for (auto m : orders) {
    if (m > kMaxMomentOrder)
      throw DomainError("moment order " + std::to_string(m) + " exceeds " +
                        std::to_string(kMaxMomentOrder));
    max_m = std::max(max_m, m);
  }
  const double A = mean_A(w, f, x, table);
  const double B = variance_B(w, f, x, table);
  const double Bs = w.params.beta == 1.0 ? B : B_star(B, static_cast<double>(x), w.params.beta);

  const auto acc = chunked_reduce<MomentAccumulator>(
      1, x, ctx,
      [&](std::uint64_t lo, std::uint64_t hi) {
        CompensatedSum s, first;
        std::array<CompensatedSum, kMaxMomentOrder + 1> pw;
        table.for_each_factorization(lo, hi, [&](std::uint64_t, const Factorization& fac) {
          const double al = eval_weight(w, fac);
          if (al == 0.0) return;
          const double fv = eval_additive(f, fac);
          const double d = fv - A;
          s.add(al);
          first.add(al * fv);
          double term = al;
          for (unsigned k = 1; k <= max_m; ++k) {
            term *= d;
            pw[k].add(term);
          }
        });
        MomentAccumulator out;
        out.s = s.value();
        out.first = first.value();
        out.powers[0] = out.s;
        for (unsigned k = 1; k <= max_m; ++k) out.powers[k] = pw[k].value();
        return out;
      },
      merge_moments, MomentAccumulator{});

  if (!std::isfinite(acc.s) || !(acc.s > 0.0)) throw OverflowError("weighted sum S(x) is not finite and positive");
  const double mean = acc.first / acc.s;
  std::vector<double> centered(max_m + 1);
  for (unsigned k = 0; k <= max_m; ++k) centered[k] = acc.powers[k] / acc.s;
  centered[0] = 1.0;

  std::vector<MomentReport> out;
  for (auto m : orders) {
    MomentReport r;
    r.x = x;
    r.m = m;
    r.s_x = acc.s;
    r.a_x = A;
    r.b_x = B;
    r.b_star_x = Bs;
    r.m_xm = centered[m];
    r.empirical_mean = mean;
    // f - mean = (f - A) + (A - mean)
    double shifted = 0.0;
    for (unsigned k = 0; k <= m; ++k)
      shifted += static_cast<double>(binomial(m, k)) * std::pow(A - mean, static_cast<double>(m - k)) *
                 centered[k];
    r.m_xm_empirical = m == 0 ? 1.0 : shifted;
    if (m == 0) {
      r.predicted = 1.0;
      r.normalized_residual = 0.0;
    } else {
      require_positive_variance(B);
      r.predicted = predicted_moment(m, B);
      r.normalized_residual =
          (r.m_xm - r.predicted) / (gaussian_constants(m).C_m * std::pow(B, 0.5 * (m - 1.0)));
    }
    out.push_back(r);
  }
  return out;
}

MomentReport weighted_moment_M(const WeightSpec& w, const AdditiveSpec& f, std::uint64_t x,
                               unsigned m, const SieveTable& table, const ExecContext& ctx) {
  return weighted_moments(w, f, x, {m}, table, ctx).front();
}

WeightedDistribution weighted_distribution(const WeightSpec& w, const AdditiveSpec& f,
                                           std::uint64_t x, const SieveTable& table,
                                           const ExecContext& ctx) {
  if (x > table.limit()) throw DomainError("x exceeds the sieve limit");
  using Atoms = std::map<double, double>;
  const Atoms atoms = chunked_reduce<Atoms>(
      1, x, ctx,
      [&](std::uint64_t lo, std::uint64_t hi) {
        Atoms local;
        table.for_each_factorization(lo, hi, [&](std::uint64_t, const Factorization& fac) {
          const double al = eval_weight(w, fac);
          if (al == 0.0) return;
          local[eval_additive(f, fac)] += al;
        });
        return local;
      },
      [](Atoms a, Atoms b) {
        if (a.size() < b.size()) {
          for (const auto& [v, wt] : a) b[v] += wt;
          return b;
        }
        for (const auto& [v, wt] : b) a[v] += wt;
        return a;
      },
      Atoms{});
  WeightedDistribution d;
  CompensatedSum total;
  for (const auto& [v, wt] : atoms) {
    d.values.push_back(v);
    d.weights.push_back(wt);
    total.add(wt);
  }
  d.total = total.value();
  return d;
}

double ks_distance(const WeightedDistribution& dist, double A, double B, double* location) {
  require_positive_variance(B);
  if (!(dist.total > 0.0)) throw DomainError("empty weighted distribution");
  const double sb = std::sqrt(B);
  double sup = 0.0;
  double where = 0.0;
  double below = 0.0;
  for (std::size_t j = 0; j < dist.values.size(); ++j) {
    const double V = (dist.values[j] - A) / sb;
    const double ph = phi_gaussian(V);
    const double after = std::min(1.0, below + dist.weights[j] / dist.total);
    const double gap = std::max(std::abs(below - ph), std::abs(after - ph));
    if (gap > sup) {
      sup = gap;
      where = V;
    }
    below = after;
  }
  if (location) *location = where;
  return sup;
}

CdfReport empirical_cdf(const WeightedDistribution& dist, std::uint64_t x, double A, double B,
                        const std::vector<double>& grid) {
  require_positive_variance(B);
  if (!std::is_sorted(grid.begin(), grid.end())) throw DomainError("CDF grid must be sorted");
  CdfReport r;
  r.x = x;
  r.s_x = dist.total;
  r.a_x = A;
  r.b_x = B;
  r.grid = grid;
  const double sb = std::sqrt(B);
  std::size_t j = 0;
  double cum = 0.0;
  for (double V : grid) {
    const double cut = A + V * sb;
    while (j < dist.values.size() && dist.values[j] <= cut) cum += dist.weights[j++];
    r.cdf.push_back(j == dist.values.size() ? 1.0 : std::min(1.0, cum / dist.total));
    r.phi.push_back(phi_gaussian(V));
  }
  r.ks_distance = ks_distance(dist, A, B, &r.ks_location);
  return r;
}

CdfReport empirical_cdf(const WeightSpec& w, const AdditiveSpec& f, std::uint64_t x,
                        const std::vector<double>& grid, const SieveTable& table,
                        const ExecContext& ctx) {
  const double A = mean_A(w, f, x, table);
  const double B = require_positive_variance(variance_B(w, f, x, table));
  return empirical_cdf(weighted_distribution(w, f, x, table, ctx), x, A, B, grid);
}

std::complex<double> char_function(const WeightedDistribution& dist, double A, double B, double t) {
  require_positive_variance(B);
  const double sb = std::sqrt(B);
  CompensatedSum re, im;
  for (std::size_t j = 0; j < dist.values.size(); ++j) {
    const double arg = t * (dist.values[j] - A) / sb;
    re.add(dist.weights[j] * std::cos(arg));
    im.add(dist.weights[j] * std::sin(arg));
  }
  return {re.value() / dist.total, im.value() / dist.total};
}

std::complex<double> char_function(const WeightSpec& w, const AdditiveSpec& f, std::uint64_t x,
                                   double t, const SieveTable& table, const ExecContext& ctx) {
  if (x > table.limit()) throw DomainError("x exceeds the sieve limit");
  const double A = mean_A(w, f, x, table);
  const double sb = std::sqrt(require_positive_variance(variance_B(w, f, x, table)));
  struct Acc {
    double s = 0, re = 0, im = 0;
  };
  const Acc acc = chunked_reduce<Acc>(
      1, x, ctx,
      [&](std::uint64_t lo, std::uint64_t hi) {
        CompensatedSum s, re, im;
        table.for_each_factorization(lo, hi, [&](std::uint64_t, const Factorization& fac) {
          const double al = eval_weight(w, fac);
          if (al == 0.0) return;
          const double arg = t * (eval_additive(f, fac) - A) / sb;
          s.add(al);
          re.add(al * std::cos(arg));
          im.add(al * std::sin(arg));
        });
        return Acc{s.value(), re.value(), im.value()};
      },
      [](Acc a, Acc b) { return Acc{a.s + b.s, a.re + b.re, a.im + b.im}; }, Acc{});
  return {acc.re / acc.s, acc.im / acc.s};
}

TruncationSets build_truncation_sets(const AdditiveSpec& f, std::uint64_t x, double eps, double K,
                                     double b_star, const SieveTable& table) {
  if (!(eps > 0.0) || !(K > eps)) throw DomainError("truncation needs 0 < eps < K");
  if (!(b_star > 0.0)) throw DegenerateVarianceError("B* must be positive");
  TruncationSets s;
  s.eps = eps;
  s.K = K;
  s.b_star = b_star;
  s.lower = eps * std::sqrt(b_star);
  s.upper = K * std::sqrt(b_star);
  for (auto p : table.primes_up_to(x)) {
    switch (s.classify(f.rule(p, 1))) {
      case TruncationClass::kMinus: ++s.count_minus; break;
      case TruncationClass::kPlus: ++s.count_plus; break;
      case TruncationClass::kInfinity: ++s.count_infinity; break;
    }
  }
  return s;
}

AdditiveSpec truncated_additive(const AdditiveSpec& f, const TruncationSets& sets, double z,
                                double beta) {
  AdditiveSpec out;
  out.name = "truncated(" + f.name + ")";
  out.strongly_additive = true;
  out.bound_M = f.bound_M;
  out.description = {{"name", "truncated"}, {"base", f.description}, {"eps", sets.eps}, {"K", sets.K}};
  const bool keep_upper_plus = beta != 1.0;
  out.rule = [rule = f.rule, sets, z, keep_upper_plus](std::uint64_t p, std::uint32_t) {
    const double fp = rule(p, 1);
    switch (sets.classify(fp)) {
      case TruncationClass::kMinus:
      case TruncationClass::kInfinity: return fp;
      case TruncationClass::kPlus:
        return keep_upper_plus && static_cast<double>(p) > z ? fp : 0.0;
    }
    return 0.0;
  };
  return out;
}

MertensFit fit_mertens(const WeightSpec& w, const std::vector<std::uint64_t>& x_grid,
                       const SieveTable& table) {
  if (x_grid.size() < 3) throw FitError("Mertens fit needs at least 3 grid points");
  std::vector<std::uint64_t> grid = x_grid;
  std::sort(grid.begin(), grid.end());
  const double ee = std::exp(std::exp(1.0));
  if (static_cast<double>(grid.front()) <= ee) throw FitError("grid points must exceed e^e");
  if (grid.back() > table.limit()) throw DomainError("grid exceeds the sieve limit");
  const auto primes = table.primes_up_to(grid.back());
  std::vector<double> xs, ys;
  CompensatedSum acc;
  std::size_t i = 0;
  for (auto x : grid) {
    for (; i < primes.size() && primes[i] <= x; ++i)
      acc.add(w.rule(primes[i], 1) / prime_power_sigma(primes[i], w.params.sigma0));
    xs.push_back(std::log(std::log(static_cast<double>(x))));
    ys.push_back(acc.value());
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (!(sxx > 1e-12)) throw FitError("Mertens fit is singular; widen the grid");
  MertensFit fit;
  fit.beta_hat = sxy / sxx;
  fit.m_hat = my - fit.beta_hat * mx;
  return fit;
}

}  // namespace wekac
