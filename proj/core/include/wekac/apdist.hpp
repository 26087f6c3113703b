#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wekac/decomposition.hpp"
#include "wekac/exec.hpp"
#include "wekac/functions.hpp"
#include "wekac/polynomial.hpp"
#include "wekac/sieve.hpp"

namespace wekac {

struct ApMomentReport {
  std::uint64_t x = 0;
  unsigned m = 0;
  double s_x = 0.0;
  double a_fg = 0.0;
  double b_fg = 0.0;
  double m_fg = 0.0;
  double predicted = 0.0;
  double normalized_residual = 0.0;
};

struct DiscrepancyReport {
  std::uint64_t x = 0;
  std::uint64_t q = 1;
  std::vector<std::uint64_t> residues;  // a coprime to q, ascending
  std::vector<double> deltas;
  double max_abs = 0.0;
  double normalizer = 0.0;  // S(x)/phi(q)
};

struct ModifiedLocal {
  double F_bar = 1.0;
  double F_tilde = 0.0;
};

/// (sum_{p<=x} rho_g(p) f(p)/p, sum_{p<=x} rho_g(p) f(p)^2/p).
std::pair<double, double> afg_bfg(const AdditiveSpec& f, const PolySpec& g, std::uint64_t x,
                                  const SieveTable& table);

/// g(n) for n <= x, factored from the table when g(n) <= limit and by trial
/// division against the table's primes otherwise.
Factorization factor_poly_value(const PolySpec& g, std::uint64_t n, const SieveTable& table);

/// S(x)^{-1} sum alpha(n) (f(g(n)) - A_fg)^m for each requested order.
std::vector<ApMomentReport> moment_fg(const WeightSpec& w, const AdditiveSpec& f, const PolySpec& g,
                                      std::uint64_t x, const std::vector<unsigned>& orders,
                                      const SieveTable& table, const ExecContext& ctx = {});

/// Delta_alpha(x; q, a); requires gcd(a, q) = 1.
double delta_ap(const WeightSpec& w, std::uint64_t x, std::uint64_t q, std::uint64_t a,
                const SieveTable& table, const ExecContext& ctx = {});

/// Delta_alpha(x; q, a) for every a coprime to q from one scan.
DiscrepancyReport discrepancy_report(const WeightSpec& w, std::uint64_t x, std::uint64_t q,
                                     const SieveTable& table, const ExecContext& ctx = {});

/// Requires Q0 > c_g |g(0)| and every prime factor of q above Q0.
ModifiedLocal modified_local(const LocalFactorTable& lft, const PolySpec& g, const Factorization& q,
                             std::uint64_t Q0);

/// G~_1(sigma0, q) from the prime-power closed form.
double g_tilde1_closed(const AdditiveSpec& f, const LocalFactorTable& lft, const PolySpec& g,
                       const Factorization& q, std::uint64_t Q0);
/// G~_1(sigma0, q) from the divisor sum; at most 8 distinct primes.
double g_tilde1_expand(const AdditiveSpec& f, const LocalFactorTable& lft, const PolySpec& g,
                       const Factorization& q, std::uint64_t Q0);

}  // namespace wekac
