#include "wekac/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wekac/error.hpp"

namespace wekac {

namespace {

constexpr std::size_t kMaxExpandPrimes = 8;

Factorization squarefree_factors(std::uint64_t a) {
  if (a == 0) throw DomainError("argument must be positive");
  const Factorization fac = trial_factorize(a);
  if (!fac.squarefree()) throw DomainError(std::to_string(a) + " is not squarefree");
  return fac;
}

double scaled_f(const AdditiveSpec& f, std::uint64_t p) {
  return f.rule(p, 1) / f.bound_M;
}

double loglog_power(std::uint64_t p, double theta0) {
  if (theta0 == 0.0) return 1.0;
  return std::pow(std::log(std::log(static_cast<double>(p) + 1.0)), theta0);
}

// Visits every (a, b) with ab | R_q: each prime goes to a, to b, or to neither.
template <class Visit>
void for_each_ab(const Factorization& q, Visit visit) {
  const std::size_t k = q.size();
  if (k > kMaxExpandPrimes)
    throw CapacityError("divisor-sum expansion limited to " + std::to_string(kMaxExpandPrimes) +
                        " distinct primes");
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 3;
  std::vector<int> role(k);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < k; ++i) {
      role[i] = static_cast<int>(c % 3);  // 0: neither, 1: a, 2: b
      c /= 3;
    }
    visit(role);
  }
}

}  // namespace

LocalFactorData local_factor(const WeightSpec& w, std::uint64_t p) {
  LocalFactorData d;
  d.p = p;
  d.local_sum = local_factor_sum(w, p);
  d.F_p = 1.0 - 1.0 / d.local_sum;
  d.psi0_p = d.local_sum - 1.0 - w.rule(p, 1) / std::pow(static_cast<double>(p), w.params.sigma0);
  if (d.psi0_p < 0.0 && d.psi0_p > -1e-15) d.psi0_p = 0.0;
  return d;
}

LocalFactorTable::LocalFactorTable(const WeightSpec& w, std::uint64_t prime_limit)
    : weight_(w), prime_limit_(prime_limit), primes_(primes_up_to(prime_limit)) {
  data_.reserve(primes_.size());
  for (auto p : primes_) data_.push_back(local_factor(weight_, p));
}

LocalFactorData LocalFactorTable::operator()(std::uint64_t p) const {
  if (p <= prime_limit_) {
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it != primes_.end() && *it == p) return data_[it - primes_.begin()];
  }
  return local_factor(weight_, p);
}

std::uint64_t compute_Q0(const WeightSpec& w, std::uint64_t cap) {
  std::uint64_t q0 = 2;
  for (auto p : primes_up_to(cap))
    if (local_factor_sum(w, p) - 1.0 > 0.5) q0 = std::max(q0, p);
  return q0;
}

double F_product(const WeightSpec& w, std::uint64_t a) {
  double v = 1.0;
  for (const auto& [p, nu] : squarefree_factors(a)) v *= local_factor(w, p).F_p;
  return v;
}

double lambda_tilde(const WeightSpec& w, std::uint64_t a) {
  double v = 1.0;
  for (const auto& [p, nu] : squarefree_factors(a)) v *= local_factor_sum(w, p) - 1.0;
  return v;
}

double L_of_a(const WeightSpec& w, std::uint64_t a) {
  double v = 1.0;
  for (const auto& [p, nu] : squarefree_factors(a)) v *= loglog_power(p, w.params.theta0);
  return v;
}

EulerProductValue lambda_alpha_of_a(const WeightSpec& w, std::uint64_t a, std::uint64_t P_max) {
  const Factorization fa = squarefree_factors(a);
  const double beta = w.params.beta;
  double log_value = -std::log(w.params.sigma0) - std::lgamma(beta);
  for (const auto& [p, nu] : fa) log_value += beta * std::log1p(-1.0 / static_cast<double>(p));
  double tail = 0.0;
  for (auto p : primes_up_to(P_max)) {
    if (fa.divisible_by(p)) continue;
    const double term =
        beta * std::log1p(-1.0 / static_cast<double>(p)) + std::log(local_factor_sum(w, p));
    log_value += term;
    if (2 * p > P_max) tail += term;
  }
  return {std::exp(log_value), std::abs(tail)};
}

double f_p_value(const AdditiveSpec& f, const LocalFactorData& lf, bool n_divisible) {
  const double fp = scaled_f(f, lf.p);
  return n_divisible ? fp * (1.0 - lf.F_p) : -fp * lf.F_p;
}

double f_q_value(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& q,
                 const Factorization& n) {
  double v = 1.0;
  for (const auto& [p, nu] : q) v *= std::pow(f_p_value(f, lft(p), n.divisible_by(p)), nu);
  return v;
}

double G_closed(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& q) {
  double v = 1.0;
  for (const auto& [p, nu] : q) {
    const double F = lft(p).F_p;
    const double fp = scaled_f(f, p);
    const double sign = nu % 2 == 0 ? 1.0 : -1.0;
    v *= std::pow(fp, nu) * F * (1.0 - F) *
         (sign * std::pow(F, nu - 1.0) + std::pow(1.0 - F, nu - 1.0));
  }
  return v;
}

double G_expand(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& q) {
  const std::size_t k = q.size();
  std::vector<double> F(k), fa(k), fn(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto lf = lft(q[i].p);
    F[i] = lf.F_p;
    fa[i] = std::pow(f_p_value(f, lf, true), q[i].nu);   // p | a
    fn[i] = std::pow(f_p_value(f, lf, false), q[i].nu);  // p does not divide a
  }
  double total = 0.0;
  for_each_ab(q, [&](const std::vector<int>& role) {
    double term = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      switch (role[i]) {
        case 0: term *= fn[i]; break;
        case 1: term *= fa[i] * F[i]; break;
        case 2: term *= -fn[i] * F[i]; break;
      }
    }
    total += term;
  });
  return total;
}

double H_value(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& q) {
  const double theta0 = lft.weight().params.theta0;
  double v = 1.0;
  for (const auto& [p, nu] : q) {
    const double F = lft(p).F_p;
    const double af = std::pow(std::abs(scaled_f(f, p)), nu);
    const double Lp = loglog_power(p, theta0) / static_cast<double>(p);
    v *= af * (std::pow(F, nu) * (1.0 + Lp) + std::pow(1.0 - F, nu) * Lp);
  }
  return v;
}

double H_expand(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& q) {
  const double theta0 = lft.weight().params.theta0;
  const std::size_t k = q.size();
  std::vector<double> Lp(k), fa(k), fn(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto lf = lft(q[i].p);
    Lp[i] = loglog_power(q[i].p, theta0) / static_cast<double>(q[i].p);
    fa[i] = std::pow(std::abs(f_p_value(f, lf, true)), q[i].nu);
    fn[i] = std::pow(std::abs(f_p_value(f, lf, false)), q[i].nu);
  }
  double total = 0.0;
  for_each_ab(q, [&](const std::vector<int>& role) {
    double term = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      switch (role[i]) {
        case 0: term *= fn[i]; break;
        case 1: term *= fa[i] * Lp[i]; break;
        case 2: term *= fn[i] * Lp[i]; break;
      }
    }
    total += term;
  });
  return total;
}

unsigned omega_zw(const Factorization& n, double z, double w) {
  unsigned count = 0;
  for (const auto& pp : n) {
    const double p = static_cast<double>(pp.p);
    if (p > z && p <= w) ++count;
  }
  return count;
}

DecompositionParams make_params(double x, double v, std::uint64_t Q0, unsigned m) {
  if (!(v >= 1.0)) throw DomainError("decomposition needs v >= 1");
  DecompositionParams d;
  d.x = x;
  d.v = v;
  d.Q0 = Q0;
  d.m = m;
  d.z = std::pow(x, 1.0 / v);
  d.w = std::pow(x, 1.0 / std::log(v + 2.0));
  if (!(static_cast<double>(Q0) < d.z && d.z <= d.w && d.w <= x))
    throw DomainError("decomposition needs Q0 < z <= w <= x (got Q0=" + std::to_string(Q0) +
                      ", z=" + std::to_string(d.z) + ", w=" + std::to_string(d.w) + ")");
  return d;
}

double default_v(const ClassConstants& c, unsigned m, double x) {
  if (c.beta == 1.0) return 2.0 * m / (1.0 - c.rho0);
  if (!(x > std::exp(std::exp(1.0)))) throw DomainError("default_v needs x > e^e");
  const double v = std::pow(std::log(std::log(x)), m * (c.theta0 + 2.0));
  const double cap = std::log(x) / std::log(100.0);
  return std::max(1.0, std::min(v, cap));
}

ResidualModel::ResidualModel(const AdditiveSpec& f, const LocalFactorTable& lft,
                             const DecompositionParams& params, double A_x, const SieveTable& table)
    : f_(f), params_(params), scale_(1.0 / f.bound_M), centre_(A_x / f.bound_M), drift_(0.0) {
  if (!f.strongly_additive) throw DomainError("the residual model needs a strongly additive f");
  CompensatedSum acc;
  for (auto p : table.primes_up_to(static_cast<std::uint64_t>(params.z))) {
    if (p <= params.Q0) continue;
    acc.add(scaled_f(f, p) * lft(p).F_p);
  }
  drift_ = acc.value();
}

double ResidualModel::residual(const Factorization& n) const {
  double fn = 0.0;
  double local = 0.0;
  for (const auto& pp : n) {
    const double fp = f_.rule(pp.p, 1) * scale_;
    fn += fp;
    if (pp.p > params_.Q0 && static_cast<double>(pp.p) <= params_.z) local += fp;
  }
  return (fn - centre_) - (local - drift_);
}

double approx_residual(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& n,
                       const DecompositionParams& params, double A_x, const SieveTable& table) {
  return ResidualModel(f, lft, params, A_x, table).residual(n);
}

ResidualSummary residual_scan(const ResidualModel& model, std::uint64_t n_max,
                              const SieveTable& table, const ExecContext& ctx) {
  struct Acc {
    double rmax = 0.0;
    double emax = -1e300;
  };
  const auto& prm = model.params();
  const Acc acc = chunked_reduce<Acc>(
      1, n_max, ctx,
      [&](std::uint64_t lo, std::uint64_t hi) {
        Acc a;
        table.for_each_factorization(lo, hi, [&](std::uint64_t, const Factorization& fac) {
          const double r = std::abs(model.residual(fac));
          a.rmax = std::max(a.rmax, r);
          a.emax = std::max(a.emax, r - omega_zw(fac, prm.z, prm.w));
        });
        return a;
      },
      [](Acc a, Acc b) { return Acc{std::max(a.rmax, b.rmax), std::max(a.emax, b.emax)}; }, Acc{});
  ResidualSummary s;
  s.n_max = n_max;
  s.residual_max = acc.rmax;
  s.excess_max = acc.emax;
  s.fitted_c = std::max(0.0, acc.emax) / (std::log(prm.v + 2.0) + 1.0);
  return s;
}

double g_identity_max_error(const AdditiveSpec& f, const LocalFactorTable& lft, std::uint64_t Q0,
                            std::uint64_t prime_bound, unsigned samples, unsigned max_primes,
                            unsigned max_nu, std::uint64_t seed) {
  std::vector<std::uint64_t> pool;
  for (auto p : primes_up_to(prime_bound))
    if (p > Q0) pool.push_back(p);
  if (pool.empty()) throw DomainError("no primes above Q0 below the bound");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (unsigned s = 0; s < samples; ++s) {
    const unsigned k = 1 + static_cast<unsigned>(rng() % std::min<std::size_t>(max_primes, pool.size()));
    std::vector<std::uint64_t> chosen;
    while (chosen.size() < k) {
      const auto p = pool[rng() % pool.size()];
      if (std::find(chosen.begin(), chosen.end(), p) == chosen.end()) chosen.push_back(p);
    }
    std::sort(chosen.begin(), chosen.end());
    Factorization q;
    for (auto p : chosen) q.push(p, 1 + static_cast<std::uint32_t>(rng() % max_nu));
    worst = std::max(worst, std::abs(G_closed(f, lft, q) - G_expand(f, lft, q)));
  }
  return worst;
}

}  // namespace wekac
