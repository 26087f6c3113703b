#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wekac/functions.hpp"
#include "wekac/sieve.hpp"

namespace wekac {

inline constexpr double kDefaultSlack = 2.0;

struct ConditionPoint {
  double at = 0.0;     // x for (ii) and (iii), the prime range end for (i) and (iv)
  double value = 0.0;  // measured quantity
  double scaled = 0.0; // value compared against the declared bound
};

struct ConditionReport {
  std::string condition;  // "i", "ii", "iii", "iv"
  std::vector<ConditionPoint> points;
  double measured = 0.0;  // the sup (or the last partial sum for iii)
  double declared = 0.0;
  double slack = kDefaultSlack;
  bool pass = false;
  std::vector<std::uint64_t> violators;
  double beta_hat = 0.0;  // condition (ii) only
  std::string note;
};

/// sup of alpha(p^nu) / p^{(rho0+sigma0-1)nu}. `violators` lists primes where
/// the ratio exceeds 1 (the bound with constant one).
ConditionReport check_i(const WeightSpec& w, std::uint64_t prime_limit, std::uint32_t nu_max = 64,
                        double slack = kDefaultSlack);

/// sum_{p<=x} alpha(p) log p p^{1-sigma0} / x on the grid, residual scaled by
/// (log x)^{A0}; passes when every residual is within the declared bound and
/// the upper half of the grid does not grow past the lower half.
ConditionReport check_ii(const WeightSpec& w, const std::vector<std::uint64_t>& x_grid,
                         const SieveTable& table, double slack = kDefaultSlack);

/// Partial sums of alpha(p)^2/p^{2s} + sum_{nu>=2} alpha(p^nu)/p^{s nu},
/// s = r + sigma0 - 1, over non-exception primes. Converged when the last
/// decade adds < 1e-3 of the total, or when decade increments decay
/// geometrically (ratio <= 0.75) with extrapolated tail <= 5% of the total.
ConditionReport check_iii(const WeightSpec& w, std::uint64_t prime_limit,
                          std::uint32_t nu_max = 64);

/// sup of p sum_nu nu alpha(p^nu) p^{-sigma0 nu} / (loglog(p+1))^theta0.
ConditionReport check_iv(const WeightSpec& w, std::uint64_t prime_limit, std::uint32_t nu_max = 64,
                         double slack = kDefaultSlack);

struct AdversarialRow {
  std::uint64_t p_considered = 0;
  bool included = false;
  double s_P = 0.0;  // after the decision
  double u = 0.0;    // u(p_considered)
};

struct AdversarialSet {
  std::vector<std::uint64_t> primes;
  std::vector<AdversarialRow> trace;
  double max_gap = 0.0;  // sup_x |s_P(x) - u(x)| over 17 <= x <= limit
  unsigned sign_changes = 0;
};

/// u(x) = loglog x / logloglog x, x > e^e.
double adversarial_u(double x);

/// Greedy set starting at 17: the next prime q' joins iff s_P(q) < u(q).
AdversarialSet build_adversarial_set(std::uint64_t limit);

}  // namespace wekac
