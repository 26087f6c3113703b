#pragma once

#include <cstdint>
#include <vector>

#include "wekac/exec.hpp"
#include "wekac/functions.hpp"
#include "wekac/sieve.hpp"

namespace wekac {

struct LocalFactorData {
  std::uint64_t p = 0;
  double F_p = 0.0;        // 1 - 1/local_sum
  double psi0_p = 0.0;     // local_sum - 1 - alpha(p) p^{-sigma0}
  double local_sum = 1.0;  // sum_{nu>=0} alpha(p^nu) p^{-sigma0 nu}
};

LocalFactorData local_factor(const WeightSpec& w, std::uint64_t p);

/// Local factors for every prime up to a bound, computed once.
class LocalFactorTable {
 public:
  LocalFactorTable(const WeightSpec& w, std::uint64_t prime_limit);

  /// Memoized below the bound, computed on demand above it.
  LocalFactorData operator()(std::uint64_t p) const;
  std::uint64_t prime_limit() const { return prime_limit_; }
  const WeightSpec& weight() const { return weight_; }

 private:
  WeightSpec weight_;
  std::uint64_t prime_limit_;
  std::vector<std::uint64_t> primes_;
  std::vector<LocalFactorData> data_;
};

/// Largest prime p <= cap whose local tail sum_{nu>=1} alpha(p^nu)p^{-sigma0 nu}
/// exceeds 1/2 (at least 2), so the tail is <= 1/2 for all p > Q0 in range.
std::uint64_t compute_Q0(const WeightSpec& w, std::uint64_t cap = 100000);

/// Products over p | a for squarefree a (DomainError otherwise).
double F_product(const WeightSpec& w, std::uint64_t a);
double lambda_tilde(const WeightSpec& w, std::uint64_t a);
double L_of_a(const WeightSpec& w, std::uint64_t a);

struct EulerProductValue {
  double value = 0.0;
  /// |log| of the factors over (P_max/2, P_max], a proxy for the
  /// relative size of the neglected tail.
  double tail_estimate = 0.0;
};

/// lambda_alpha(a) with the product over p not dividing a truncated at P_max.
EulerProductValue lambda_alpha_of_a(const WeightSpec& w, std::uint64_t a, std::uint64_t P_max);

/// f_p(n) with f rescaled by 1/M: f(p)(1-F) if p | n, else -f(p)F.
double f_p_value(const AdditiveSpec& f, const LocalFactorData& lf, bool n_divisible);
/// f_q(n) = prod_{p^nu || q} f_p(n)^nu.
double f_q_value(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& q,
                 const Factorization& n);

/// G(sigma0, q) from the prime-power closed form.
double G_closed(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& q);
/// G(sigma0, q) from the divisor sum over ab | R_q; at most 8 distinct primes.
double G_expand(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& q);

/// H(sigma0, q) from its prime-power values.
double H_value(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& q);
/// H(sigma0, q) from the divisor sum; at most 8 distinct primes.
double H_expand(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& q);

/// Number of prime divisors of n in (z, w].
unsigned omega_zw(const Factorization& n, double z, double w);

struct DecompositionParams {
  double x = 0.0;
  double v = 0.0;
  double z = 0.0;  // x^{1/v}
  double w = 0.0;  // x^{1/log(v+2)}
  std::uint64_t Q0 = 2;
  unsigned m = 1;
};

/// Validates Q0 < z <= w <= x and v >= 1.
DecompositionParams make_params(double x, double v, std::uint64_t Q0, unsigned m);

/// 2m/(1-rho0) when beta = 1; otherwise (loglog x)^{m(theta0+2)}, capped so
/// that z >= 100.
double default_v(const ClassConstants& c, unsigned m, double x);

/// r(n) = (f(n) - A) - sum_{Q0<p<=z} f_p(n), everything in units of f/M.
class ResidualModel {
 public:
  ResidualModel(const AdditiveSpec& f, const LocalFactorTable& lft, const DecompositionParams& params,
                double A_x, const SieveTable& table);

  double residual(const Factorization& n) const;
  const DecompositionParams& params() const { return params_; }
  double scale() const { return scale_; }

 private:
  AdditiveSpec f_;
  DecompositionParams params_;
  double scale_;         // 1/M
  double centre_;        // A_x / M
  double drift_;         // sum_{Q0<p<=z} f(p) F_p / M
};

double approx_residual(const AdditiveSpec& f, const LocalFactorTable& lft, const Factorization& n,
                       const DecompositionParams& params, double A_x, const SieveTable& table);

struct ResidualSummary {
  std::uint64_t n_max = 0;
  double residual_max = 0.0;  // max |r(n)|
  double excess_max = 0.0;    // max |r(n)| - omega(n; z, w)
  double fitted_c = 0.0;      // excess_max / (log(v+2) + 1)
};

ResidualSummary residual_scan(const ResidualModel& model, std::uint64_t n_max,
                              const SieveTable& table, const ExecContext& ctx = {});

/// max |G_closed - G_expand| over `samples` random q with 1..max_primes
/// distinct primes in (Q0, prime_bound] and exponents 1..max_nu.
double g_identity_max_error(const AdditiveSpec& f, const LocalFactorTable& lft, std::uint64_t Q0,
                            std::uint64_t prime_bound, unsigned samples, unsigned max_primes,
                            unsigned max_nu, std::uint64_t seed);

}  // namespace wekac
