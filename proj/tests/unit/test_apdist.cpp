#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "wekac/apdist.hpp"
#include "wekac/decomposition.hpp"
#include "wekac/error.hpp"
#include "wekac/functions.hpp"
#include "wekac/polynomial.hpp"
#include "wekac/sieve.hpp"

using namespace wekac;

namespace {

const SieveTable& table() {
  static const SieveTable t(100000);
  return t;
}

Factorization prime_power(std::uint64_t p, std::uint32_t nu) {
  Factorization f;
  f.push(p, nu);
  return f;
}

const PolySpec& x2p1() {
  static const PolySpec g = make_poly({1, 0, 1});
  return g;
}

}  // namespace

TEST(AfgBfg, Examples) {
  const auto [a, b] = afg_bfg(catalog::omega(), x2p1(), 10, table());
  EXPECT_NEAR(a, 0.5 + 0.4, 1e-15);
  EXPECT_NEAR(b, 0.9, 1e-15);
  const auto id = make_poly({1, 1});  // x + 1: one root mod every p
  double s = 0.0;
  for (std::uint64_t p : oracle::primes(1000)) s += 1.0 / p;
  EXPECT_NEAR(afg_bfg(catalog::omega(), id, 1000, table()).first, s, 1e-12);
  const auto z = afg_bfg(catalog::scaled(catalog::omega(), 0.0), x2p1(), 1000, table());
  EXPECT_EQ(z.first, 0.0);
  EXPECT_EQ(z.second, 0.0);
}

TEST(MomentFg, MatchesNaive) {
  const std::uint64_t x = 1000;
  const auto [A, B] = afg_bfg(catalog::omega(), x2p1(), x, table());
  const oracle::ArithFn f = [](std::uint64_t n) { return static_cast<double>(oracle::omega(n * n + 1)); };
  for (const auto& [w, alpha] :
       {std::pair<WeightSpec, oracle::ArithFn>{catalog::one(), [](std::uint64_t) { return 1.0; }},
        std::pair<WeightSpec, oracle::ArithFn>{catalog::divisor_k(2),
                                               [](std::uint64_t n) { return double(oracle::d_k(2, n)); }}}) {
    const auto rows = moment_fg(w, catalog::omega(), x2p1(), x, {0, 1, 2, 3, 4}, table());
    EXPECT_DOUBLE_EQ(rows[0].m_fg, 1.0);
    for (const auto& r : rows) {
      if (r.m == 0) continue;
      const double ref = oracle::moment(alpha, f, x, r.m, A);
      ASSERT_NEAR(r.m_fg, ref, 1e-9 * std::max(1.0, std::abs(ref))) << w.name << " m=" << r.m;
      EXPECT_EQ(r.b_fg, B);
    }
  }
}

TEST(MomentFg, VarianceTrend) {
  auto ratio = [](std::uint64_t x) {
    const auto r = moment_fg(catalog::one(), catalog::omega(), x2p1(), x, {2}, table());
    return r[0].m_fg / r[0].b_fg;
  };
  EXPECT_LT(std::abs(ratio(10000) - 1.0), std::abs(ratio(100) - 1.0));
}

TEST(MomentFg, CapacityForLargeValues) {
  const auto cubic = make_poly({2, 0, 0, 1});
  // x^3 + 2 at x = 10^5 needs primes up to ~3.2e7 for trial division.
  EXPECT_THROW(moment_fg(catalog::one(), catalog::omega(), cubic, 100000, {2}, table()), Error);
}

TEST(Discrepancy, Examples) {
  EXPECT_DOUBLE_EQ(delta_ap(catalog::one(), 100, 4, 1, table()), 0.0);
  for (std::uint64_t a = 0; a < 3; ++a) EXPECT_DOUBLE_EQ(delta_ap(catalog::one(), 100, 1, a, table()), 0.0);
  const double d1 = delta_ap(catalog::divisor_k(2), 10000, 3, 1, table());
  const double d2 = delta_ap(catalog::divisor_k(2), 10000, 3, 2, table());
  EXPECT_NEAR(d1 + d2, 0.0, 1e-9);
  EXPECT_THROW(delta_ap(catalog::one(), 100, 4, 2, table()), DomainError);
}

TEST(Discrepancy, ReportCancels) {
  const auto w = catalog::divisor_k(2);
  const double S = 0.0 + [&] {
    double s = 0.0;
    for (std::uint64_t n = 1; n <= 20000; ++n) s += static_cast<double>(oracle::d_k(2, n));
    return s;
  }();
  for (std::uint64_t q : {3ull, 10ull, 36ull, 49ull}) {
    const auto r = discrepancy_report(w, 20000, q, table());
    double total = 0.0;
    for (double d : r.deltas) total += d;
    EXPECT_NEAR(total, 0.0, 1e-9 * S) << q;
    EXPECT_EQ(r.residues.size(), oracle::euler_phi(q));
    EXPECT_NEAR(r.deltas.front(), delta_ap(w, 20000, q, r.residues.front(), table()), 1e-9);
  }
}

TEST(ModifiedLocal, Example) {
  const LocalFactorTable lft(catalog::one(), 1000);
  const auto ml = modified_local(lft, x2p1(), prime_power(5, 1), 2);
  EXPECT_NEAR(ml.F_bar, 0.8, 1e-15);
  EXPECT_NEAR(ml.F_tilde, 0.4, 1e-15);
  EXPECT_NEAR(g_tilde1_closed(catalog::omega(), lft, x2p1(), prime_power(5, 2), 2), 0.24, 1e-15);
  EXPECT_NEAR(g_tilde1_expand(catalog::omega(), lft, x2p1(), prime_power(5, 2), 2), 0.24, 1e-15);
}

TEST(ModifiedLocal, Properties) {
  const auto w = catalog::divisor_k(2);
  const LocalFactorTable lft(w, 2000);
  const std::uint64_t Q0 = 7;
  for (std::uint64_t p : oracle::primes(2000)) {
    if (p <= Q0) continue;
    ASSERT_NEAR(g_tilde1_closed(catalog::omega(), lft, x2p1(), prime_power(p, 1), Q0), 0.0, 1e-14);
    const auto ml = modified_local(lft, x2p1(), prime_power(p, 1), Q0);
    ASSERT_GE(ml.F_tilde, 0.0);
    ASSERT_LE(ml.F_tilde, 1.0);
    if (p % 4 == 3) {
      ASSERT_EQ(ml.F_tilde, 0.0);
      for (std::uint32_t nu = 1; nu <= 4; ++nu)
        ASSERT_EQ(g_tilde1_closed(catalog::omega(), lft, x2p1(), prime_power(p, nu), Q0), 0.0);
    }
  }
  Factorization q;
  q.push(13, 2);
  q.push(17, 1);
  q.push(29, 3);
  EXPECT_NEAR(g_tilde1_closed(catalog::omega(), lft, x2p1(), q, Q0),
              g_tilde1_expand(catalog::omega(), lft, x2p1(), q, Q0), 1e-14);
  EXPECT_THROW(modified_local(lft, x2p1(), prime_power(5, 1), Q0), DomainError);
  EXPECT_THROW(modified_local(lft, make_poly({11, 0, 1}), prime_power(13, 1), 7), DomainError);
}

TEST(RhoAverage, NearOne) {
  double s = 0.0;
  const auto primes = oracle::primes(100000);
  for (std::uint64_t p : primes) s += static_cast<double>(rho_g(x2p1(), p, 1));
  EXPECT_NEAR(s / primes.size(), 1.0, 0.2);
}
