#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wekac/sieve.hpp"

namespace wekac {

using PrimePowerRule = std::function<double(std::uint64_t p, std::uint32_t nu)>;
using IntegerPrimePowerRule = std::function<std::uint64_t(std::uint64_t p, std::uint32_t nu)>;
/// Closed form of the full local factor sum_{nu>=0} alpha(p^nu) p^{-sigma0 nu}.
using LocalFactorRule = std::function<double(std::uint64_t p)>;

/// Constants of the weight class: growth exponents plus the implied constants
/// of the "<<" bounds, which have no canonical values.
struct ClassConstants {
  double A0 = 1.0;
  double beta = 1.0;
  double sigma0 = 1.0;
  double theta0 = 0.0;
  double rho0 = 0.0;
  double r = 0.9;

  double cond_i_constant = 1.0;   // alpha(p^nu) <= C p^{(rho0+sigma0-1)nu}
  double cond_ii_constant = 1.0;  // |ratio - beta| (log x)^A0 <= C
  double cond_iv_constant = 1.0;  // sum nu alpha(p^nu)p^{-sigma0 nu} <= C (loglog(p+1))^theta0 / p

  /// False when the constants are catalog defaults rather than derived bounds.
  bool verified = false;
};

/// A nonnegative multiplicative weight alpha given on prime powers.
struct WeightSpec {
  std::string name;
  PrimePowerRule rule;
  IntegerPrimePowerRule integer_rule;  // empty unless the weight is integer-valued
  LocalFactorRule local_factor;        // empty when no closed form is known
  ClassConstants params;
  std::set<std::uint64_t> exception_primes;
  nlohmann::json description = nlohmann::json::object();
};

/// A real additive function f given on prime powers.
struct AdditiveSpec {
  std::string name;
  PrimePowerRule rule;
  bool strongly_additive = false;
  double bound_M = 1.0;
  double kappa = 0.0;
  nlohmann::json description = nlohmann::json::object();
};

/// alpha(n) for the integer with this factorization; 1 on the empty product.
double eval_weight(const WeightSpec& w, const Factorization& fac);

/// Exact integer evaluation for integer-valued weights.
std::uint64_t eval_weight_exact(const WeightSpec& w, const Factorization& fac);

double eval_additive(const AdditiveSpec& f, const Factorization& fac);

/// Strongly additive contraction: f~(p^nu) = f(p).
AdditiveSpec contraction(const AdditiveSpec& f);

/// sum_{nu>=0} alpha(p^nu) p^{-sigma0 nu}: closed form if available, else the
/// truncated series.
double local_factor_sum(const WeightSpec& w, std::uint64_t p);

/// The truncated series alone, regardless of any closed form.
double local_factor_series(const WeightSpec& w, std::uint64_t p);

/// Replaces selected prime-power values of a base weight.
WeightSpec with_overrides(WeightSpec base,
                          const std::map<std::pair<std::uint64_t, std::uint32_t>, double>& table);
AdditiveSpec with_overrides(AdditiveSpec base,
                            const std::map<std::pair<std::uint64_t, std::uint32_t>, double>& table);

// Catalog ------------------------------------------------------------------

namespace catalog {

WeightSpec one();
WeightSpec mu_squared();
WeightSpec divisor_k(unsigned k);
/// d_kappa(n)^c for real kappa > 0 and real c.
WeightSpec divisor_kappa_power(double kappa, double c);
WeightSpec kappa_omega(double kappa);
WeightSpec kappa_big_omega(double kappa);
WeightSpec sigma_lambda(double lambda);
WeightSpec euler_phi();
WeightSpec power(double lambda);
WeightSpec r2_quarter();
/// alpha(p)=1, alpha(p^nu)=p^{nu/3} for nu >= 2: large prime-power values, still in the class for r=0.9.
WeightSpec cube_root_powers();

AdditiveSpec omega();
AdditiveSpec big_omega();
AdditiveSpec scaled(const AdditiveSpec& f, double c);

}  // namespace catalog

/// Limits used when materializing table-backed weights (rho_g, tau^2).
struct CatalogLimits {
  std::uint64_t limit = 1000000;
  std::uint64_t rho_cap = 1000000;
  std::uint64_t tau_cap = 1000000;
};

/// Names accepted by weight_from_json / additive_from_json.
const std::vector<std::string>& weight_catalog_names();
const std::vector<std::string>& additive_catalog_names();

/// {"name": "d_k", "k": 3, "overrides": [[p, nu, value], ...]}
WeightSpec weight_from_json(const nlohmann::json& j, const CatalogLimits& limits = {});
/// {"name": "omega"} etc.
AdditiveSpec additive_from_json(const nlohmann::json& j);

/// The weights audited by default (one instance per catalog family).
std::vector<WeightSpec> default_catalog(const CatalogLimits& limits);

}  // namespace wekac
