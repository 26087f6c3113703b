#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "wekac/error.hpp"
#include "wekac/functions.hpp"
#include "wekac/polynomial.hpp"
#include "wekac/sieve.hpp"

using namespace wekac;

namespace {

const SieveTable& table() {
  static const SieveTable t(1000000);
  return t;
}

Factorization fac(std::uint64_t n) { return factorize(n, table()); }

CatalogLimits small_limits() {
  CatalogLimits l;
  l.limit = 100000;
  l.tau_cap = 100000;
  return l;
}

}  // namespace

TEST(Weights, EvalExamples) {
  EXPECT_DOUBLE_EQ(eval_weight(catalog::divisor_k(3), fac(4)), 6.0);
  EXPECT_EQ(oracle::d_k(3, 4), 6u);
  EXPECT_DOUBLE_EQ(eval_weight(catalog::mu_squared(), fac(12)), 0.0);
  EXPECT_DOUBLE_EQ(eval_weight(catalog::r2_quarter(), fac(5)), 2.0);
  EXPECT_EQ(oracle::r2(5) / 4, 2u);
  EXPECT_DOUBLE_EQ(eval_weight(catalog::one(), Factorization{}), 1.0);
}

TEST(Weights, DivisorAndR2AgainstBruteForce) {
  const auto d2 = catalog::divisor_k(2), d3 = catalog::divisor_k(3), r = catalog::r2_quarter();
  const auto mu2 = catalog::mu_squared();
  for (std::uint64_t n = 1; n <= 600; ++n) {
    ASSERT_EQ(eval_weight_exact(d2, fac(n)), oracle::d_k(2, n)) << n;
    ASSERT_EQ(eval_weight_exact(d3, fac(n)), oracle::d_k(3, n)) << n;
    ASSERT_DOUBLE_EQ(eval_weight(r, fac(n)), static_cast<double>(oracle::r2(n)) / 4.0) << n;
    ASSERT_DOUBLE_EQ(eval_weight(mu2, fac(n)), oracle::squarefree(n) ? 1.0 : 0.0) << n;
  }
}

TEST(Weights, PhiAndPowers) {
  const auto phi = catalog::euler_phi();
  for (std::uint64_t n = 1; n <= 300; ++n)
    ASSERT_DOUBLE_EQ(eval_weight(phi, fac(n)), static_cast<double>(oracle::euler_phi(n)));
  EXPECT_NEAR(eval_weight(catalog::power(0.5), fac(36)), 6.0, 1e-12);
  // sigma_1(12) = 28
  EXPECT_NEAR(eval_weight(catalog::sigma_lambda(1.0), fac(12)), 28.0, 1e-9);
  EXPECT_NEAR(eval_weight(catalog::kappa_omega(2.0), fac(12)), 4.0, 1e-12);
  EXPECT_NEAR(eval_weight(catalog::kappa_big_omega(1.5), fac(12)), 1.5 * 1.5 * 1.5, 1e-12);
}

TEST(Weights, NegativeRuleIsSpecificationError) {
  WeightSpec w = catalog::one();
  w.rule = [](std::uint64_t, std::uint32_t) { return -1.0; };
  EXPECT_THROW(eval_weight(w, fac(6)), SpecificationError);
}

TEST(Weights, MultiplicativeOnCoprimePairs) {
  auto weights = default_catalog(small_limits());
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick(1, 10000);
  for (const auto& w : weights) {
    int checked = 0;
    while (checked < 400) {
      const auto m = pick(rng), n = pick(rng);
      if (oracle::gcd(m, n) != 1 || m * n > small_limits().limit) continue;
      const double lhs = eval_weight(w, fac(m * n));
      const double rhs = eval_weight(w, fac(m)) * eval_weight(w, fac(n));
      ASSERT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs))) << w.name << " " << m << " " << n;
      ++checked;
    }
  }
}

TEST(Additive, EvalExamples) {
  EXPECT_DOUBLE_EQ(eval_additive(catalog::omega(), fac(12)), 2.0);
  EXPECT_DOUBLE_EQ(eval_additive(catalog::big_omega(), fac(12)), 3.0);
  EXPECT_DOUBLE_EQ(eval_additive(catalog::omega(), fac(1)), 0.0);
}

TEST(Additive, AdditiveOnCoprimePairs) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> pick(1, 10000);
  const auto f = catalog::scaled(catalog::big_omega(), 0.7);
  for (int i = 0; i < 3000; ++i) {
    const auto m = pick(rng), n = pick(rng);
    if (oracle::gcd(m, n) != 1 || m * n > table().limit()) continue;
    ASSERT_NEAR(eval_additive(f, fac(m * n)), eval_additive(f, fac(m)) + eval_additive(f, fac(n)), 1e-12);
  }
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    ASSERT_DOUBLE_EQ(eval_additive(catalog::omega(), fac(n)), oracle::omega(n));
    ASSERT_DOUBLE_EQ(eval_additive(catalog::big_omega(), fac(n)), oracle::big_omega(n));
  }
}

TEST(Additive, Contraction) {
  const auto c = contraction(catalog::big_omega());
  EXPECT_TRUE(c.strongly_additive);
  for (std::uint64_t n = 1; n <= 1000; ++n)
    ASSERT_DOUBLE_EQ(eval_additive(c, fac(n)), eval_additive(catalog::omega(), fac(n)));
  const auto cc = contraction(catalog::omega());
  for (std::uint64_t n = 1; n <= 1000; ++n)
    ASSERT_DOUBLE_EQ(eval_additive(cc, fac(n)), eval_additive(catalog::omega(), fac(n)));
  const auto f = catalog::scaled(catalog::big_omega(), 2.5);
  EXPECT_DOUBLE_EQ(eval_additive(contraction(f), fac(8)), f.rule(2, 1));
}

TEST(Overrides, WeightTable) {
  const auto w = with_overrides(catalog::one(), {{{2, 1}, 5.0}, {{3, 2}, 0.0}});
  EXPECT_DOUBLE_EQ(eval_weight(w, fac(2)), 5.0);
  EXPECT_DOUBLE_EQ(eval_weight(w, fac(18)), 5.0 * 0.0);
  EXPECT_DOUBLE_EQ(eval_weight(w, fac(10)), 5.0);
  EXPECT_DOUBLE_EQ(eval_weight(w, fac(4)), 1.0);
  // The closed local factor no longer applies.
  EXPECT_NEAR(local_factor_sum(w, 2), 1.0 + 5.0 / 2 + 0.5, 1e-12);
}

TEST(Overrides, AdditiveTable) {
  const auto f = with_overrides(catalog::omega(), {{{2, 1}, 3.0}});
  EXPECT_DOUBLE_EQ(eval_additive(f, fac(8)), 3.0);
  EXPECT_DOUBLE_EQ(eval_additive(f, fac(6)), 4.0);
  EXPECT_TRUE(f.strongly_additive);
  EXPECT_GE(f.bound_M, 3.0);
  const auto g = with_overrides(catalog::omega(), {{{2, 2}, 7.0}});
  EXPECT_FALSE(g.strongly_additive);
  EXPECT_DOUBLE_EQ(eval_additive(g, fac(4)), 7.0);
}

TEST(Json, LoadsCatalogAndOverrides) {
  const auto w = weight_from_json({{"name", "d_k"}, {"k", 3}});
  EXPECT_DOUBLE_EQ(eval_weight(w, fac(4)), 6.0);
  const auto f = additive_from_json({{"name", "omega"}});
  EXPECT_DOUBLE_EQ(eval_additive(f, fac(30)), 3.0);
  const auto o = weight_from_json({{"name", "one"}, {"overrides", {{2, 1, 4.0}}}});
  EXPECT_DOUBLE_EQ(eval_weight(o, fac(6)), 4.0);
  const auto s = additive_from_json({{"name", "scaled"}, {"base", {{"name", "Omega"}}}, {"c", 2.0}});
  EXPECT_DOUBLE_EQ(eval_additive(s, fac(8)), 6.0);
}

TEST(Json, UnknownNameListsCatalog) {
  try {
    weight_from_json({{"name", "nope"}});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("d_k"), std::string::npos);
  }
  EXPECT_THROW(additive_from_json({{"name", "nope"}}), DomainError);
  EXPECT_THROW(weight_from_json({{"name", "d_k"}, {"k", 2.5}}), DomainError);
}

TEST(LocalFactor, SeriesMatchesClosedForms) {
  for (const auto& w : {catalog::one(), catalog::mu_squared(), catalog::kappa_omega(2.0),
                        catalog::kappa_big_omega(1.5), catalog::sigma_lambda(1.0), catalog::sigma_lambda(-0.5)}) {
    ASSERT_TRUE(static_cast<bool>(w.local_factor)) << w.name;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 101ull, 7919ull})
      EXPECT_NEAR(local_factor_series(w, p), w.local_factor(p), 1e-12 * w.local_factor(p)) << w.name << " " << p;
  }
  EXPECT_NEAR(local_factor_sum(catalog::one(), 2), 2.0, 1e-15);
  EXPECT_NEAR(local_factor_sum(catalog::mu_squared(), 7), 1.0 + 1.0 / 7, 1e-15);
}

TEST(LocalFactor, DivergentSeriesIsSpecificationError) {
  WeightSpec w = catalog::one();
  w.local_factor = nullptr;
  w.rule = [](std::uint64_t p, std::uint32_t nu) { return std::pow(static_cast<double>(p), nu); };
  EXPECT_THROW(local_factor_series(w, 3), SpecificationError);
}

TEST(RhoG, PrimeExamples) {
  const auto g = make_poly({1, 0, 1});
  EXPECT_EQ(rho_g(g, 5, 1), 2u);
  EXPECT_EQ(rho_g(g, 3, 1), 0u);
  EXPECT_EQ(rho_g(g, 2, 1), 1u);
}

TEST(RhoG, AgainstEnumeration) {
  for (const auto& coeffs : std::vector<std::vector<std::int64_t>>{{1, 0, 1}, {1, 1, 1}, {2, 0, 0, 1}, {-2, 0, 1}, {3, 1}}) {
    const auto g = make_poly(coeffs);
    std::vector<long long> gl(coeffs.begin(), coeffs.end());
    for (std::uint64_t n = 1; n <= 400; ++n)
      ASSERT_EQ(rho_g(g, fac(n)), oracle::roots_mod(gl, n)) << n;
    for (std::uint64_t q : {8ull, 9ull, 25ull, 27ull, 49ull, 243ull, 1024ull})
      ASSERT_EQ(rho_g(g, fac(q)), rho_g_enumerate(g, q)) << q;
  }
}

TEST(RhoG, MultiplicativeViaCrt) {
  const auto g = make_poly({1, 0, 1});
  std::vector<long long> gl = {1, 0, 1};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> pick(1, 10000);
  int checked = 0;
  while (checked < 50) {
    const auto m = pick(rng), n = pick(rng);
    if (oracle::gcd(m, n) != 1 || m * n > table().limit()) continue;
    ASSERT_EQ(rho_g(g, fac(m * n)), rho_g(g, fac(m)) * rho_g(g, fac(n)));
    ++checked;
  }
  EXPECT_EQ(rho_g(g, fac(65)), oracle::roots_mod(gl, 65));
}

TEST(RhoG, ValidationAndCapacity) {
  EXPECT_THROW(make_poly({5}), DomainError);
  EXPECT_THROW(make_poly({0, 1}), DomainError);    // g(0) = 0
  EXPECT_THROW(make_poly({-1, 0, 1}), DomainError);  // reducible: x^2 - 1
  EXPECT_EQ(rho_g(make_poly({1, 0, 1}, 5), 5, 1), 0u);  // p | c_g
  // Non-separable prime: x^2 + 4 at p = 2 needs lifting, but its roots stay few.
  const auto g4 = make_poly({4, 0, 1});
  EXPECT_EQ(rho_g(g4, 2, 12, 1000), oracle::roots_mod({4, 0, 1}, 4096));
  EXPECT_NO_THROW(rho_g(g4, 2, 30, 1000));
  // x^2 + 2^40 looks like x^2 modulo small powers of 2: the root set keeps doubling.
  EXPECT_THROW(rho_g(make_poly({std::int64_t{1} << 40, 0, 1}), 2, 30, 1000), CapacityError);
}
