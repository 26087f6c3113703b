#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "wekac/decomposition.hpp"
#include "wekac/error.hpp"
#include "wekac/functions.hpp"
#include "wekac/moments.hpp"
#include "wekac/sieve.hpp"

using namespace wekac;

namespace {

const SieveTable& table() {
  static const SieveTable t(200000);
  return t;
}

Factorization fac(std::uint64_t n) { return table().factorize(n); }

Factorization prime_power(std::uint64_t p, std::uint32_t nu) {
  Factorization f;
  f.push(p, nu);
  return f;
}

}  // namespace

TEST(LocalFactors, Examples) {
  const auto lf = local_factor(catalog::one(), 2);
  EXPECT_NEAR(lf.local_sum, 2.0, 1e-15);
  EXPECT_NEAR(lf.F_p, 0.5, 1e-15);
  EXPECT_NEAR(lf.psi0_p, 0.5, 1e-15);
  for (std::uint64_t p : {3ull, 7ull, 101ull}) {
    EXPECT_NEAR(local_factor(catalog::one(), p).F_p, 1.0 / p, 1e-15);
    const auto mu = local_factor(catalog::mu_squared(), p);
    EXPECT_NEAR(mu.local_sum, 1.0 + 1.0 / p, 1e-15);
    EXPECT_NEAR(mu.F_p, 1.0 / (p + 1.0), 1e-15);
    EXPECT_NEAR(mu.psi0_p, 0.0, 1e-15);
  }
}

TEST(LocalFactors, TableMatchesDirect) {
  const auto w = catalog::divisor_k(3);
  const LocalFactorTable lft(w, 1000);
  for (std::uint64_t p : {2ull, 997ull, 1009ull, 7919ull})
    EXPECT_DOUBLE_EQ(lft(p).F_p, local_factor(w, p).F_p);
}

TEST(LocalFactors, Q0) {
  EXPECT_EQ(compute_Q0(catalog::one()), 2u);
  EXPECT_EQ(compute_Q0(catalog::mu_squared()), 2u);
  // d_3: tail = (1 - 1/p)^{-3} - 1 exceeds 1/2 for p <= 7.
  EXPECT_EQ(compute_Q0(catalog::divisor_k(3)), 7u);
}

TEST(Products, Examples) {
  const auto one = catalog::one();
  EXPECT_DOUBLE_EQ(F_product(one, 1), 1.0);
  EXPECT_DOUBLE_EQ(lambda_tilde(one, 1), 1.0);
  EXPECT_DOUBLE_EQ(L_of_a(one, 1), 1.0);
  EXPECT_NEAR(F_product(one, 6), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(lambda_tilde(one, 6), 1.0 * 0.5, 1e-15);
  for (std::uint64_t a : {1ull, 30ull, 2310ull}) EXPECT_DOUBLE_EQ(L_of_a(one, a), 1.0);
  EXPECT_THROW(F_product(one, 12), DomainError);
  EXPECT_THROW(L_of_a(one, 18), DomainError);
}

TEST(Products, LambdaAlpha) {
  EXPECT_NEAR(lambda_alpha_of_a(catalog::one(), 1, 100000).value, 1.0, 1e-12);
  EXPECT_NEAR(lambda_alpha_of_a(catalog::one(), 6, 100000).value, 1.0 / 3.0, 1e-12);
  const auto mu = lambda_alpha_of_a(catalog::mu_squared(), 1, 1000000);
  EXPECT_NEAR(mu.value, 6.0 / (M_PI * M_PI), 2e-6);
  EXPECT_GE(mu.tail_estimate, 0.0);
  // Density of squarefree integers coprime to 6.
  const double s = coprime_sum_S(catalog::mu_squared(), 200000, 6, table());
  EXPECT_NEAR(s / 200000.0, lambda_alpha_of_a(catalog::mu_squared(), 6, 1000000).value, 1e-3);
}

TEST(FModel, Examples) {
  const auto f = catalog::omega();
  const auto lf = local_factor(catalog::one(), 2);
  EXPECT_DOUBLE_EQ(f_p_value(f, lf, true), 0.5);
  EXPECT_DOUBLE_EQ(f_p_value(f, lf, false), -0.5);
  const auto zero = catalog::scaled(f, 0.0);
  EXPECT_DOUBLE_EQ(f_p_value(zero, lf, true), 0.0);
  const LocalFactorTable lft(catalog::one(), 1000);
  const double F = lft(7).F_p;
  EXPECT_NEAR(f_q_value(f, lft, prime_power(7, 2), fac(10)), F * F, 1e-15);
}

TEST(FModel, DependsOnlyOnGcdWithRadical) {
  const LocalFactorTable lft(catalog::divisor_k(2), 10000);
  const auto f = catalog::big_omega();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> pick(2, 200000);
  for (int i = 0; i < 2000; ++i) {
    const auto q = fac(pick(rng) % 5000 + 2);
    const auto n = pick(rng);
    const auto g = oracle::gcd(n, q.radical());
    ASSERT_EQ(f_q_value(f, lft, q, fac(n)), f_q_value(f, lft, q, fac(g)));
    ASSERT_LE(std::abs(f_q_value(f, lft, q, fac(n))), 1.0);
  }
}

TEST(GFunctional, Examples) {
  const LocalFactorTable lft(catalog::one(), 10000);
  const auto f = catalog::omega();
  EXPECT_NEAR(G_closed(f, lft, prime_power(2, 2)), 0.25, 1e-15);
  EXPECT_NEAR(G_expand(f, lft, prime_power(2, 2)), 0.25, 1e-15);
  EXPECT_NEAR(G_closed(f, lft, prime_power(2, 3)), 0.0, 1e-15);
  EXPECT_NEAR(G_expand(f, lft, prime_power(2, 3)), 0.0, 1e-15);
  for (std::uint64_t p : oracle::primes(2000))
    if (p > 2) {
      ASSERT_NEAR(G_closed(f, lft, prime_power(p, 1)), 0.0, 1e-14);
      ASSERT_NEAR(G_expand(f, lft, prime_power(p, 1)), 0.0, 1e-14);
    }
}

TEST(GFunctional, ClosedEqualsExpand) {
  for (const auto& w : {catalog::one(), catalog::divisor_k(2), catalog::mu_squared()}) {
    const LocalFactorTable lft(w, 10000);
    const auto Q0 = compute_Q0(w);
    EXPECT_LT(g_identity_max_error(catalog::omega(), lft, Q0, 10000, 200, 4, 4, 17), 1e-12) << w.name;
    EXPECT_LT(g_identity_max_error(catalog::scaled(catalog::omega(), -0.6), lft, Q0, 10000, 200, 4, 4, 18), 1e-12);
  }
}

TEST(GFunctional, BoundsAndSign) {
  const auto w = catalog::divisor_k(2);
  const LocalFactorTable lft(w, 10000);
  const auto Q0 = compute_Q0(w);
  for (std::uint64_t p : oracle::primes(3000)) {
    if (p <= Q0) continue;
    for (std::uint32_t nu = 1; nu <= 8; ++nu) {
      const double g = G_closed(catalog::omega(), lft, prime_power(p, nu));
      ASSERT_LE(std::abs(g), 0.25 + 1e-15);
      if (nu % 2 == 0) ASSERT_GE(g, 0.0);
    }
  }
}

TEST(GFunctional, ExpandCapacity) {
  const LocalFactorTable lft(catalog::one(), 100);
  Factorization big;
  for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull}) big.push(p, 1);
  EXPECT_THROW(G_expand(catalog::omega(), lft, big), CapacityError);
  EXPECT_THROW(H_expand(catalog::omega(), lft, big), CapacityError);
}

TEST(GFunctional, SquareSumAgainstVariance) {
  const auto w = catalog::one();
  const LocalFactorTable lft(w, 100000);
  const auto Q0 = compute_Q0(w);
  const std::uint64_t z = 100000;
  double sum_g = 0.0, bound = 0.0;
  for (std::uint64_t p : oracle::primes(z)) {
    const auto lf = lft(p);
    if (p > Q0) sum_g += G_closed(catalog::omega(), lft, prime_power(p, 2));
    if (p <= Q0) bound += 1.0 / p;
    bound += lf.psi0_p + 1.0 / (static_cast<double>(p) * p);
  }
  const double B = variance_B(w, catalog::omega(), z, table());
  EXPECT_GE(B - sum_g, 0.0);
  EXPECT_LE(B - sum_g, bound);
}

TEST(HFunctional, Examples) {
  const LocalFactorTable lft(catalog::one(), 10000);
  const auto f = catalog::omega();
  for (std::uint64_t p : {3ull, 11ull, 97ull}) {
    EXPECT_NEAR(H_value(f, lft, prime_power(p, 1)), 2.0 / p, 1e-15);
    EXPECT_NEAR(H_expand(f, lft, prime_power(p, 1)), 2.0 / p, 1e-15);
  }
  EXPECT_DOUBLE_EQ(H_value(catalog::scaled(f, 0.0), lft, fac(30)), 0.0);
}

TEST(HFunctional, MultiplicativeAndMatchesExpand) {
  const auto w = catalog::divisor_k(2);
  const LocalFactorTable lft(w, 10000);
  const auto f = catalog::scaled(catalog::omega(), 0.8);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::uint64_t> pick(2, 3000);
  for (int i = 0; i < 300; ++i) {
    const auto a = pick(rng), b = pick(rng);
    if (oracle::gcd(a, b) != 1 || a * b > 200000) continue;
    const double hab = H_value(f, lft, fac(a * b));
    ASSERT_NEAR(hab, H_value(f, lft, fac(a)) * H_value(f, lft, fac(b)), 1e-14 * std::max(1.0, hab));
    ASSERT_NEAR(hab, H_expand(f, lft, fac(a * b)), 1e-12 * std::max(1.0, hab));
    ASSERT_GE(hab, 0.0);
  }
}

TEST(OmegaZw, Examples) {
  EXPECT_EQ(omega_zw(fac(30), 2, 10), 2u);
  EXPECT_EQ(omega_zw(fac(30), 0.5, 1.5), 0u);
  EXPECT_EQ(omega_zw(fac(2 * 11 * 101), 10, 100), 1u);
}

TEST(Params, Validation) {
  const auto p = make_params(1e5, 3.0, 2, 2);
  EXPECT_NEAR(p.z, std::pow(1e5, 1.0 / 3.0), 1e-9);
  EXPECT_NEAR(p.w, std::pow(1e5, 1.0 / std::log(5.0)), 1e-9);
  EXPECT_THROW(make_params(1e5, 0.5, 2, 2), DomainError);
  EXPECT_THROW(make_params(1e5, 3.0, 100, 2), DomainError);  // z ~ 46 < Q0
  ClassConstants c;
  EXPECT_DOUBLE_EQ(default_v(c, 2, 1e6), 4.0);
  c.rho0 = 0.5;
  EXPECT_DOUBLE_EQ(default_v(c, 2, 1e6), 8.0);
  c.beta = 2.0;
  const double v = default_v(c, 2, 1e6);
  EXPECT_GE(std::pow(1e6, 1.0 / v), 100.0 - 1e-9);
}

TEST(Residual, ZeroFunction) {
  const auto w = catalog::one();
  const LocalFactorTable lft(w, 100000);
  const auto zero = catalog::scaled(catalog::omega(), 0.0);
  const auto params = make_params(1e5, 3.0, 2, 2);
  const ResidualModel model(zero, lft, params, 0.0, table());
  for (std::uint64_t n = 1; n <= 1000; ++n) ASSERT_DOUBLE_EQ(model.residual(fac(n)), 0.0);
}

TEST(Residual, SmallPrimeIntegers) {
  // f supported above Q0: r(n) for n built from primes <= Q0 is the centred drift.
  const auto w = catalog::one();
  const LocalFactorTable lft(w, 100000);
  const std::uint64_t x = 100000;
  const auto f = with_overrides(catalog::omega(), {{{2, 1}, 0.0}});
  const auto params = make_params(1e5, 3.0, 2, 1);
  const double A = mean_A(w, f, x, table());
  double drift = 0.0;
  for (std::uint64_t p : oracle::primes(static_cast<std::uint64_t>(params.z)))
    if (p > 2) drift += 1.0 / p;
  const double r = approx_residual(f, lft, fac(64), params, A, table());
  EXPECT_NEAR(r, -A + drift, 1e-12);
  EXPECT_LT(std::abs(r), std::log(3.0) + 0.5);  // about log v
}

TEST(Residual, EnvelopeForOmega) {
  const auto w = catalog::one();
  const LocalFactorTable lft(w, 100000);
  const double x = 1e5, v = 3.0;
  const auto params = make_params(x, v, 2, 2);
  const double A = mean_A(w, catalog::omega(), 100000, table());
  const ResidualModel model(catalog::omega(), lft, params, A, table());
  double worst = -1e9;
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    const auto fn = fac(n);
    worst = std::max(worst, std::abs(model.residual(fn)) - omega_zw(fn, params.z, params.w));
  }
  EXPECT_LE(worst, 2.0 * std::log(v + 2.0) + 3.0);
  const auto summary = residual_scan(model, 10000, table());
  EXPECT_NEAR(summary.excess_max, worst, 1e-12);
}
