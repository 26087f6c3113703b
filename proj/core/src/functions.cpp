#include "wekac/functions.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "wekac/error.hpp"

namespace wekac {

namespace {

constexpr std::uint32_t kMaxSeriesTerms = 4096;
constexpr double kNegligible = 1e-18;

std::string prime_power_label(std::uint64_t p, std::uint32_t nu) {
  return std::to_string(p) + "^" + std::to_string(nu);
}

}  // namespace

double eval_weight(const WeightSpec& w, const Factorization& fac) {
  double value = 1.0;
  for (const auto& [p, nu] : fac) {
    const double a = w.rule(p, nu);
    if (a < 0.0 || std::isnan(a))
      throw SpecificationError("weight '" + w.name + "' is negative at " +
                               prime_power_label(p, nu));
    value *= a;
  }
  return value;
}

std::uint64_t eval_weight_exact(const WeightSpec& w, const Factorization& fac) {
  if (!w.integer_rule)
    throw SpecificationError("weight '" + w.name + "' has no exact integer form");
  std::uint64_t value = 1;
  for (const auto& [p, nu] : fac) {
    if (__builtin_mul_overflow(value, w.integer_rule(p, nu), &value))
      throw CapacityError("exact weight value overflows 64 bits");
  }
  return value;
}

double eval_additive(const AdditiveSpec& f, const Factorization& fac) {
  double total = 0.0;
  for (const auto& [p, nu] : fac) total += f.rule(p, nu);
  return total;
}

AdditiveSpec contraction(const AdditiveSpec& f) {
  if (f.strongly_additive) return f;
  AdditiveSpec out = f;
  out.name = "contraction(" + f.name + ")";
  out.rule = [rule = f.rule](std::uint64_t p, std::uint32_t) { return rule(p, 1); };
  out.strongly_additive = true;
  out.kappa = 0.0;
  out.description = {{"name", "contraction"}, {"base", f.description}};
  return out;
}

double local_factor_series(const WeightSpec& w, std::uint64_t p) {
  const double log_p = std::log(static_cast<double>(p));
  const double sigma0 = w.params.sigma0;
  double sum = 1.0;
  double prev = 0.0;
  unsigned negligible_run = 0;
  unsigned growth_run = 0;
  for (std::uint32_t nu = 1; nu <= kMaxSeriesTerms; ++nu) {
    const double a = w.rule(p, nu);
    if (a < 0.0 || std::isnan(a))
      throw SpecificationError("weight '" + w.name + "' is negative at " +
                               prime_power_label(p, nu));
    const double term = a == 0.0 ? 0.0 : std::exp(std::log(a) - sigma0 * nu * log_p);
    if (!std::isfinite(term))
      throw SpecificationError("local series of '" + w.name + "' diverges at p=" +
                               std::to_string(p));
    sum += term;
    // The ratio test only counts once the terms keep growing; early terms of
    // e.g. d_k at p=2 rise before they decay.
    growth_run = (term > 0.0 && prev > 0.0 && term >= prev) ? growth_run + 1 : 0;
    if (growth_run >= 64)
      throw SpecificationError("local series of '" + w.name + "' diverges at p=" +
                               std::to_string(p));
    negligible_run = (term < kNegligible * sum) ? negligible_run + 1 : 0;
    if (nu >= 4 && negligible_run >= 3) return sum;
    if (term > 0.0) prev = term;
  }
  throw SpecificationError("local series of '" + w.name + "' did not converge at p=" +
                           std::to_string(p));
}

double local_factor_sum(const WeightSpec& w, std::uint64_t p) {
  if (w.local_factor) return w.local_factor(p);
  return local_factor_series(w, p);
}

WeightSpec with_overrides(WeightSpec base,
                          const std::map<std::pair<std::uint64_t, std::uint32_t>, double>& table) {
  if (table.empty()) return base;
  auto shared = std::make_shared<const std::map<std::pair<std::uint64_t, std::uint32_t>, double>>(
      table);
  bool all_integer = static_cast<bool>(base.integer_rule);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [key, value] : table) {
    if (value < 0.0 || !std::isfinite(value))
      throw SpecificationError("weight override at " + prime_power_label(key.first, key.second) +
                               " must be a finite nonnegative number");
    if (value != std::floor(value)) all_integer = false;
    rows.push_back({key.first, key.second, value});
  }
  base.rule = [shared, rule = base.rule](std::uint64_t p, std::uint32_t nu) {
    if (auto it = shared->find({p, nu}); it != shared->end()) return it->second;
    return rule(p, nu);
  };
  if (all_integer) {
    base.integer_rule = [shared, rule = base.integer_rule](std::uint64_t p, std::uint32_t nu) {
      if (auto it = shared->find({p, nu}); it != shared->end())
        return static_cast<std::uint64_t>(it->second);
      return rule(p, nu);
    };
  } else {
    base.integer_rule = nullptr;
  }
  base.local_factor = nullptr;
  base.name += "+overrides";
  base.description["overrides"] = rows;
  return base;
}

AdditiveSpec with_overrides(AdditiveSpec base,
                            const std::map<std::pair<std::uint64_t, std::uint32_t>, double>& table) {
  if (table.empty()) return base;
  auto shared = std::make_shared<const std::map<std::pair<std::uint64_t, std::uint32_t>, double>>(
      table);
  nlohmann::json rows = nlohmann::json::array();
  bool keeps_strong = base.strongly_additive;
  for (const auto& [key, value] : table) {
    if (!std::isfinite(value))
      throw SpecificationError("additive override at " + prime_power_label(key.first, key.second) +
                               " must be finite");
    if (key.second >= 2) keeps_strong = false;
    if (key.second == 1) base.bound_M = std::max(base.bound_M, std::abs(value));
    rows.push_back({key.first, key.second, value});
  }
  const bool strong = base.strongly_additive;
  base.rule = [shared, rule = base.rule, strong](std::uint64_t p, std::uint32_t nu) {
    if (auto it = shared->find({p, nu}); it != shared->end()) return it->second;
    // A strongly additive base keeps f(p^nu) = f(p) for overridden primes.
    if (strong && nu >= 2) {
      if (auto it = shared->find({p, 1}); it != shared->end()) return it->second;
    }
    return rule(p, nu);
  };
  base.strongly_additive = keeps_strong;
  base.name += "+overrides";
  base.description["overrides"] = rows;
  return base;
}

}  // namespace wekac
