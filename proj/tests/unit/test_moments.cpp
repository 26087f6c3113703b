#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "oracle.hpp"
#include "wekac/error.hpp"
#include "wekac/functions.hpp"
#include "wekac/moments.hpp"
#include "wekac/sieve.hpp"

using namespace wekac;

namespace {

const SieveTable& table() {
  static const SieveTable t(1000000);
  return t;
}

double mertens_sum(std::uint64_t x) {
  double s = 0.0;
  for (std::uint64_t p : oracle::primes(x)) s += 1.0 / static_cast<double>(p);
  return s;
}

}  // namespace

TEST(PartialSums, Examples) {
  EXPECT_DOUBLE_EQ(partial_sum_S(catalog::one(), 100, table()), 100.0);
  EXPECT_DOUBLE_EQ(partial_sum_S(catalog::mu_squared(), 30, table()), 19.0);
  EXPECT_DOUBLE_EQ(partial_sum_S(catalog::divisor_k(2), 10, table()), 27.0);
  EXPECT_DOUBLE_EQ(coprime_sum_S(catalog::one(), 10, 2, table()), 5.0);
  double sf = 0.0;
  for (std::uint64_t n = 1; n <= 30; ++n) sf += oracle::squarefree(n) && oracle::gcd(n, 6) == 1;
  EXPECT_DOUBLE_EQ(sf, 9.0);
  EXPECT_DOUBLE_EQ(coprime_sum_S(catalog::mu_squared(), 30, 6, table()), sf);
  EXPECT_DOUBLE_EQ(coprime_sum_S(catalog::divisor_k(3), 500, 1, table()),
                   partial_sum_S(catalog::divisor_k(3), 500, table()));
}

TEST(PartialSums, MatchesOracle) {
  double s = 0.0, c = 0.0;
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    s += static_cast<double>(oracle::d_k(2, n));
    if (oracle::gcd(n, 30) == 1) c += static_cast<double>(oracle::d_k(2, n));
  }
  EXPECT_NEAR(partial_sum_S(catalog::divisor_k(2), 3000, table()), s, 1e-9);
  EXPECT_NEAR(coprime_sum_S(catalog::divisor_k(2), 3000, 30, table()), c, 1e-9);
}

TEST(MeanVariance, Examples) {
  EXPECT_NEAR(mean_A(catalog::one(), catalog::omega(), 10, table()), 0.5 + 1.0 / 3 + 0.2 + 1.0 / 7, 1e-15);
  EXPECT_NEAR(mean_A(catalog::one(), catalog::omega(), 10, table()), 1.176190, 1e-6);
  for (const auto& w : {catalog::one(), catalog::divisor_k(3), catalog::euler_phi()})
    EXPECT_DOUBLE_EQ(mean_A(w, catalog::omega(), 5000, table()), variance_B(w, catalog::omega(), 5000, table()));
  EXPECT_NEAR(mean_A(catalog::divisor_k(3), catalog::omega(), 100000, table()), 3.0 * mertens_sum(100000), 1e-10);
}

TEST(MeanVariance, BStar) {
  EXPECT_DOUBLE_EQ(B_star(2.0, 1e6, 1.0), 2.0);
  const double lll = std::log(std::log(std::log(1e6)));
  EXPECT_NEAR(B_star(2.0, 1e6, 2.0), 2.0 / (lll * lll), 1e-14);
  EXPECT_THROW(B_star(2.0, 15.0, 2.0), DomainError);
}

TEST(Moments, SmallExamples) {
  const auto r0 = weighted_moments(catalog::one(), catalog::omega(), 10, {1}, table());
  EXPECT_NEAR(r0[0].m_xm, 1.1 - 1.176190476190476, 1e-12);
  const auto m0 = weighted_moment_M(catalog::one(), catalog::omega(), 100, 0, table());
  EXPECT_DOUBLE_EQ(m0.m_xm, 1.0);
  EXPECT_DOUBLE_EQ(m0.s_x, 100.0);
  EXPECT_THROW(weighted_moment_M(catalog::one(), catalog::omega(), 100, 13, table()), DomainError);
}

TEST(Moments, MatchesNaiveTwoPassOracle) {
  const std::uint64_t x = 10000;
  struct Case {
    WeightSpec w;
    oracle::ArithFn alpha;
  };
  const std::vector<Case> cases = {
      {catalog::one(), [](std::uint64_t) { return 1.0; }},
      {catalog::mu_squared(), [](std::uint64_t n) { return oracle::squarefree(n) ? 1.0 : 0.0; }},
      {catalog::divisor_k(2), [](std::uint64_t n) { return static_cast<double>(oracle::d_k(2, n)); }}};
  const oracle::ArithFn om = [](std::uint64_t n) { return static_cast<double>(oracle::omega(n)); };
  const oracle::ArithFn bo = [](std::uint64_t n) { return static_cast<double>(oracle::big_omega(n)); };
  for (const auto& c : cases) {
    for (const auto& [f, fo] : {std::pair{catalog::omega(), om}, std::pair{catalog::big_omega(), bo}}) {
      const auto reports = weighted_moments(c.w, f, x, {1, 2, 3, 4, 5, 6}, table());
      const double A = oracle::prime_sums(c.alpha, fo, x).first;
      EXPECT_NEAR(reports[0].a_x, A, 1e-12 * A);
      for (const auto& r : reports) {
        const double ref = oracle::moment(c.alpha, fo, x, r.m, A);
        ASSERT_NEAR(r.m_xm, ref, 1e-9 * std::max(1.0, std::abs(ref))) << c.w.name << " " << f.name << " m=" << r.m;
      }
    }
  }
}

TEST(Moments, ReportFields) {
  const auto r = weighted_moment_M(catalog::one(), catalog::omega(), 100000, 4, table());
  EXPECT_DOUBLE_EQ(r.predicted, predicted_moment(4, r.b_x));
  EXPECT_NEAR(r.normalized_residual, (r.m_xm - r.predicted) / (3.0 * std::pow(r.b_x, 1.5)), 1e-12);
  const auto r2 = weighted_moment_M(catalog::divisor_k(2), catalog::omega(), 100000, 2, table());
  EXPECT_GE(r2.m_xm, 0.0);
  EXPECT_GE(r2.m_xm_empirical, 0.0);
  EXPECT_LE(r2.m_xm_empirical, r2.m_xm);  // centering at the mean minimizes the second moment
}

TEST(Moments, DegenerateVariance) {
  const auto zero = catalog::scaled(catalog::omega(), 0.0);
  EXPECT_THROW(weighted_moments(catalog::one(), zero, 1000, {2}, table()), DegenerateVarianceError);
}

TEST(Moments, IndependentOfWorkers) {
  ExecContext a{1, 1 << 12}, b{4, 1 << 12};
  const auto ra = weighted_moments(catalog::divisor_k(3), catalog::big_omega(), 200000, {1, 2, 3, 4}, table(), a);
  const auto rb = weighted_moments(catalog::divisor_k(3), catalog::big_omega(), 200000, {1, 2, 3, 4}, table(), b);
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(ra[i].m_xm, rb[i].m_xm);
}

TEST(Predicted, Examples) {
  EXPECT_DOUBLE_EQ(predicted_moment(2, 3.0), 3.0);
  EXPECT_DOUBLE_EQ(predicted_moment(4, 2.0), 12.0);
  EXPECT_DOUBLE_EQ(predicted_moment(3, 7.0), 0.0);
}

TEST(Phi, Values) {
  EXPECT_DOUBLE_EQ(phi_gaussian(0.0), 0.5);
  EXPECT_NEAR(phi_gaussian(1.96), 0.975002, 1e-6);
  for (double v : {-5.0, -2.5, -1.0, -0.3, 0.7, 1.96, 3.2}) {
    EXPECT_NEAR(phi_gaussian(v), oracle::normal_cdf(v), 1e-10) << v;
    EXPECT_NEAR(phi_gaussian(-v), 1.0 - phi_gaussian(v), 1e-12);
  }
}

TEST(Cdf, Examples) {
  const auto r = empirical_cdf(catalog::one(), catalog::omega(), 100, {0.0, 12.0}, table());
  const double A = mean_A(catalog::one(), catalog::omega(), 100, table());
  int count = 0;
  for (std::uint64_t n = 1; n <= 100; ++n) count += oracle::omega(n) <= A;
  EXPECT_DOUBLE_EQ(r.cdf[0], count / 100.0);
  EXPECT_DOUBLE_EQ(r.cdf[1], 1.0);
}

TEST(Cdf, MonotoneAndBounded) {
  std::vector<double> grid;
  for (double v = -4; v <= 4; v += 0.1) grid.push_back(v);
  const auto r = empirical_cdf(catalog::divisor_k(2), catalog::omega(), 100000, grid, table());
  for (std::size_t i = 1; i < r.cdf.size(); ++i) ASSERT_LE(r.cdf[i - 1], r.cdf[i]);
  EXPECT_GE(r.ks_distance, 0.0);
  EXPECT_LE(r.ks_distance, 1.0);
  // The grid-only gap never exceeds the exact sup.
  for (std::size_t i = 0; i < grid.size(); ++i) ASSERT_LE(std::abs(r.cdf[i] - r.phi[i]), r.ks_distance + 1e-15);
}

TEST(Cdf, KsAgainstBruteForce) {
  const std::uint64_t x = 3000;
  const auto dist = weighted_distribution(catalog::one(), catalog::omega(), x, table());
  const auto [A, B] = oracle::prime_sums([](std::uint64_t) { return 1.0; },
                                         [](std::uint64_t) { return 1.0; }, x);
  double ref = 0.0;
  for (unsigned k = 0; k <= 6; ++k) {
    double below = 0.0, at_or_below = 0.0;
    for (std::uint64_t n = 1; n <= x; ++n) {
      below += oracle::omega(n) < k;
      at_or_below += oracle::omega(n) <= k;
    }
    const double phi = oracle::normal_cdf((k - A) / std::sqrt(B));
    ref = std::max({ref, std::abs(below / x - phi), std::abs(at_or_below / x - phi)});
  }
  EXPECT_NEAR(ks_distance(dist, A, B), ref, 1e-9);
}

TEST(Cdf, KsDecreasesWithX) {
  const auto small = empirical_cdf(catalog::one(), catalog::omega(), 1000, {0.0}, table());
  const auto large = empirical_cdf(catalog::one(), catalog::omega(), 1000000, {0.0}, table());
  EXPECT_LT(large.ks_distance, small.ks_distance);
}

TEST(Cdf, ScaleInvariance) {
  std::vector<double> grid = {-2, -1, 0, 1, 2};
  const auto a = empirical_cdf(catalog::one(), catalog::omega(), 50000, grid, table());
  const auto b = empirical_cdf(catalog::one(), catalog::scaled(catalog::omega(), 3.5), 50000, grid, table());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(a.cdf[i], b.cdf[i], 1e-12);
  EXPECT_NEAR(a.ks_distance, b.ks_distance, 1e-12);
}

TEST(CharFunction, Properties) {
  const auto w = catalog::one();
  const auto f = catalog::omega();
  EXPECT_NEAR(std::abs(char_function(w, f, 10000, 0.0, table()) - 1.0), 0.0, 1e-15);
  const auto plus = char_function(w, f, 10000, 0.8, table());
  const auto minus = char_function(w, f, 10000, -0.8, table());
  EXPECT_NEAR(std::abs(minus - std::conj(plus)), 0.0, 1e-12);
  EXPECT_LE(std::abs(plus), 1.0 + 1e-12);
  // Against a direct sum, and drifting toward the Gaussian value as x grows.
  {
    const std::uint64_t x = 100000;
    const double A = mean_A(w, f, x, table()), B = variance_B(w, f, x, table());
    std::complex<double> direct = 0.0;
    for (std::uint64_t n = 1; n <= x; ++n)
      direct += std::polar(1.0, (static_cast<double>(oracle::omega(n)) - A) / std::sqrt(B));
    direct /= static_cast<double>(x);
    EXPECT_NEAR(std::abs(char_function(w, f, x, 1.0, table()) - direct), 0.0, 1e-9);
  }
  const double far = std::abs(char_function(w, f, 1000, 1.0, table()) - std::exp(-0.5));
  const double near = std::abs(char_function(w, f, 1000000, 1.0, table()) - std::exp(-0.5));
  EXPECT_LT(near, far);
  const auto dist = weighted_distribution(w, f, 10000, table());
  const double A = mean_A(w, f, 10000, table());
  EXPECT_NEAR(std::abs(char_function(dist, A, A, 0.8) - plus), 0.0, 1e-12);
}

TEST(Truncation, PartitionAndEvaluator) {
  const std::uint64_t x = 100000;
  const double B = variance_B(catalog::one(), catalog::omega(), x, table());
  const auto sets = build_truncation_sets(catalog::omega(), x, 1.0, 4.0, B, table());
  EXPECT_EQ(sets.count_minus + sets.count_plus + sets.count_infinity, oracle::primes(x).size());
  // omega is bounded by 1 <= eps sqrt(B*): everything is in P-, f_eps = f~.
  EXPECT_EQ(sets.count_minus, oracle::primes(x).size());
  const auto fe = truncated_additive(catalog::omega(), sets, 100.0, 1.0);
  for (std::uint64_t n = 1; n <= 2000; ++n)
    ASSERT_DOUBLE_EQ(eval_additive(fe, table().factorize(n)), oracle::omega(n));

  // One large value at p = 3 puts 3 in P+ (beta = 1: omitted).
  const auto big = with_overrides(catalog::omega(), {{{3, 1}, 2.0}});
  const auto s2 = build_truncation_sets(big, x, 1.0, 4.0, B, table());
  EXPECT_EQ(s2.classify(2.0), TruncationClass::kPlus);
  EXPECT_EQ(s2.count_plus, 1u);
  const auto fe2 = truncated_additive(big, s2, 100.0, 1.0);
  EXPECT_DOUBLE_EQ(eval_additive(fe2, table().factorize(30)), 2.0);
  EXPECT_DOUBLE_EQ(eval_additive(fe2, table().factorize(9)), 0.0);
}

TEST(Mertens, Fits) {
  const std::vector<std::uint64_t> grid = {10000, 100000, 1000000};
  const auto one = fit_mertens(catalog::one(), grid, table());
  EXPECT_GE(one.beta_hat, 0.9);
  EXPECT_LE(one.beta_hat, 1.1);
  const auto d3 = fit_mertens(catalog::divisor_k(3), grid, table());
  EXPECT_GE(d3.beta_hat, 2.8);
  EXPECT_LE(d3.beta_hat, 3.2);
  EXPECT_DOUBLE_EQ(fit_mertens(catalog::mu_squared(), grid, table()).beta_hat, one.beta_hat);
  EXPECT_THROW(fit_mertens(catalog::one(), {10000, 100000}, table()), FitError);
  EXPECT_THROW(fit_mertens(catalog::one(), {10, 10000, 100000}, table()), FitError);
}
