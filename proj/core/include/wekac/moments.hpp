#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "wekac/exec.hpp"
#include "wekac/functions.hpp"
#include "wekac/sieve.hpp"

namespace wekac {

inline constexpr unsigned kMaxMomentOrder = 12;

struct MomentReport {
  std::uint64_t x = 0;
  unsigned m = 0;
  double s_x = 0.0;
  double a_x = 0.0;
  double b_x = 0.0;
  double b_star_x = 0.0;
  double m_xm = 0.0;  // centered at A(x)
  double predicted = 0.0;
  double normalized_residual = 0.0;
  double empirical_mean = 0.0;
  double m_xm_empirical = 0.0;  // centered at the weighted mean of f
};

/// Weighted law of f(n), n <= x: distinct values ascending with their total
/// weight.
struct WeightedDistribution {
  std::vector<double> values;
  std::vector<double> weights;
  double total = 0.0;
};

struct CdfReport {
  std::uint64_t x = 0;
  double s_x = 0.0;
  double a_x = 0.0;
  double b_x = 0.0;
  std::vector<double> grid;
  std::vector<double> cdf;
  std::vector<double> phi;
  double ks_distance = 0.0;
  double ks_location = 0.0;  // normalized V where the sup is attained
};

enum class TruncationClass { kMinus, kPlus, kInfinity };

struct TruncationSets {
  double eps = 0.0;
  double K = 0.0;
  double b_star = 0.0;
  double lower = 0.0;  // eps sqrt(B*)
  double upper = 0.0;  // K sqrt(B*)
  std::uint64_t count_minus = 0;
  std::uint64_t count_plus = 0;
  std::uint64_t count_infinity = 0;

  TruncationClass classify(double fp) const;
};

struct MertensFit {
  double beta_hat = 0.0;
  double m_hat = 0.0;
};

double partial_sum_S(const WeightSpec& w, std::uint64_t x, const SieveTable& table,
                     const ExecContext& ctx = {});
/// Sum of alpha(n) over n <= x coprime to a.
double coprime_sum_S(const WeightSpec& w, std::uint64_t x, std::uint64_t a,
                     const SieveTable& table, const ExecContext& ctx = {});

/// sum_{p<=x} alpha(p) f(p) / p^sigma0.
double mean_A(const WeightSpec& w, const AdditiveSpec& f, std::uint64_t x, const SieveTable& table);
/// sum_{p<=x} alpha(p) f(p)^2 / p^sigma0.
double variance_B(const WeightSpec& w, const AdditiveSpec& f, std::uint64_t x,
                  const SieveTable& table);
/// B when beta = 1, else B / (logloglog x)^2 (requires x > e^e).
double B_star(double B, double x, double beta);

/// All requested orders from one scan. Orders must be <= kMaxMomentOrder.
std::vector<MomentReport> weighted_moments(const WeightSpec& w, const AdditiveSpec& f,
                                           std::uint64_t x, const std::vector<unsigned>& orders,
                                           const SieveTable& table, const ExecContext& ctx = {});
MomentReport weighted_moment_M(const WeightSpec& w, const AdditiveSpec& f, std::uint64_t x,
                               unsigned m, const SieveTable& table, const ExecContext& ctx = {});

/// C_m B^{m/2} chi_m.
double predicted_moment(unsigned m, double B);
/// Standard normal CDF.
double phi_gaussian(double V);

WeightedDistribution weighted_distribution(const WeightSpec& w, const AdditiveSpec& f,
                                           std::uint64_t x, const SieveTable& table,
                                           const ExecContext& ctx = {});

/// Weighted CDF of (f(n) - A)/sqrt(B) on a grid, with the exact KS distance
/// to Phi over all jump points.
CdfReport empirical_cdf(const WeightSpec& w, const AdditiveSpec& f, std::uint64_t x,
                        const std::vector<double>& grid, const SieveTable& table,
                        const ExecContext& ctx = {});
CdfReport empirical_cdf(const WeightedDistribution& dist, std::uint64_t x, double A, double B,
                        const std::vector<double>& grid);
double ks_distance(const WeightedDistribution& dist, double A, double B, double* location = nullptr);

std::complex<double> char_function(const WeightSpec& w, const AdditiveSpec& f, std::uint64_t x,
                                   double t, const SieveTable& table, const ExecContext& ctx = {});
std::complex<double> char_function(const WeightedDistribution& dist, double A, double B, double t);

TruncationSets build_truncation_sets(const AdditiveSpec& f, std::uint64_t x, double eps, double K,
                                     double b_star, const SieveTable& table);
/// f_eps(n; x): f(p) summed over p | n in P-, plus P+ restricted to (z, x]
/// when beta != 1, plus P_infinity.
AdditiveSpec truncated_additive(const AdditiveSpec& f, const TruncationSets& sets, double z,
                                double beta);

/// Least squares of sum_{p<=x} alpha(p)/p^sigma0 against loglog x.
MertensFit fit_mertens(const WeightSpec& w, const std::vector<std::uint64_t>& x_grid,
                       const SieveTable& table);

}  // namespace wekac
