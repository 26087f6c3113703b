#include <algorithm>
#include <cmath>
#include <sstream>

#include "wekac/error.hpp"
#include "wekac/functions.hpp"
#include "wekac/polynomial.hpp"
#include "wekac/tau.hpp"

namespace wekac {

namespace {

// d_kappa(p^nu) = prod_{j<nu} (kappa + j)/(j + 1).
double divisor_kappa_at(double kappa, std::uint32_t nu) {
  double v = 1.0;
  for (std::uint32_t j = 0; j < nu; ++j) v *= (kappa + j) / (j + 1.0);
  return v;
}

// Sup over small prime powers of the quantities bounded in conditions (i)
// and (iv). Used for families without a tidy closed-form bound; the maxima
// sit at the smallest primes.
void sample_constants(WeightSpec& w) {
  const auto& c = w.params;
  double ci = 0.0;
  double civ = 0.0;
  for (auto p : primes_up_to(1000)) {
    const double lp = std::log(static_cast<double>(p));
    double measure = 0.0;
    for (std::uint32_t nu = 1; nu * lp < 600.0; ++nu) {
      const double a = w.rule(p, nu);
      if (a <= 0.0) continue;
      ci = std::max(ci, std::exp(std::log(a) - (c.rho0 + c.sigma0 - 1.0) * nu * lp));
      measure += nu * std::exp(std::log(a) - c.sigma0 * nu * lp);
    }
    civ = std::max(civ, measure * static_cast<double>(p) /
                            std::pow(std::log(std::log(static_cast<double>(p) + 1.0)), c.theta0));
  }
  w.params.cond_i_constant = ci;
  w.params.cond_iv_constant = civ;
}

std::string fmt_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

namespace catalog {

WeightSpec one() {
  WeightSpec w;
  w.name = "one";
  w.rule = [](std::uint64_t, std::uint32_t) { return 1.0; };
  w.integer_rule = [](std::uint64_t, std::uint32_t) -> std::uint64_t { return 1; };
  w.local_factor = [](std::uint64_t p) { return 1.0 / (1.0 - 1.0 / static_cast<double>(p)); };
  w.params.cond_i_constant = 1.0;
  w.params.cond_ii_constant = 0.5;
  w.params.cond_iv_constant = 4.0;  // p^2/(p-1)^2 at p = 2
  w.params.verified = true;
  w.description = {{"name", "one"}};
  return w;
}

WeightSpec mu_squared() {
  WeightSpec w;
  w.name = "mu2";
  w.rule = [](std::uint64_t, std::uint32_t nu) { return nu == 1 ? 1.0 : 0.0; };
  w.integer_rule = [](std::uint64_t, std::uint32_t nu) -> std::uint64_t { return nu == 1; };
  w.local_factor = [](std::uint64_t p) { return 1.0 + 1.0 / static_cast<double>(p); };
  w.params.cond_i_constant = 1.0;
  w.params.cond_ii_constant = 0.5;
  w.params.cond_iv_constant = 1.0;
  w.params.verified = true;
  w.description = {{"name", "mu2"}};
  return w;
}

WeightSpec divisor_k(unsigned k) {
  if (k < 1) throw DomainError("d_k requires k >= 1");
  WeightSpec w;
  w.name = "d_" + std::to_string(k);
  w.rule = [k](std::uint64_t, std::uint32_t nu) { return divisor_kappa_at(k, nu); };
  w.integer_rule = [k](std::uint64_t, std::uint32_t nu) -> std::uint64_t {
    // C(nu + k - 1, k - 1), built so each step stays integral.
    std::uint64_t v = 1;
    for (std::uint64_t j = 1; j < k; ++j) {
      std::uint64_t next;
      if (__builtin_mul_overflow(v, nu + j, &next))
        throw CapacityError("d_k value overflows 64 bits");
      v = next / j;
    }
    return v;
  };
  w.local_factor = [k](std::uint64_t p) {
    return std::pow(1.0 - 1.0 / static_cast<double>(p), -static_cast<double>(k));
  };
  w.params.beta = k;
  w.params.rho0 = 0.5;
  sample_constants(w);
  w.params.cond_iv_constant = k * std::pow(2.0, k + 1.0);  // k (p/(p-1))^{k+1} at p = 2
  w.params.cond_ii_constant = 0.5 * k;
  w.params.verified = true;
  w.description = {{"name", "d_k"}, {"k", k}};
  return w;
}

WeightSpec divisor_kappa_power(double kappa, double c) {
  if (!(kappa > 0.0)) throw DomainError("d_kappa^c requires kappa > 0");
  WeightSpec w;
  w.name = "d_kappa_c(" + fmt_param(kappa) + "," + fmt_param(c) + ")";
  w.rule = [kappa, c](std::uint64_t, std::uint32_t nu) {
    return std::pow(divisor_kappa_at(kappa, nu), c);
  };
  w.params.beta = std::pow(kappa, c);
  w.params.rho0 = 0.5;
  sample_constants(w);
  w.params.cond_ii_constant = 0.5 * w.params.beta;
  w.params.verified = false;
  w.description = {{"name", "d_kappa_c"}, {"kappa", kappa}, {"c", c}};
  return w;
}

WeightSpec kappa_omega(double kappa) {
  if (!(kappa > 0.0)) throw DomainError("kappa^omega requires kappa > 0");
  WeightSpec w;
  w.name = "kappa_omega(" + fmt_param(kappa) + ")";
  w.rule = [kappa](std::uint64_t, std::uint32_t) { return kappa; };
  w.local_factor = [kappa](std::uint64_t p) {
    return 1.0 + kappa / (static_cast<double>(p) - 1.0);
  };
  w.params.beta = kappa;
  w.params.cond_i_constant = std::max(1.0, kappa);
  w.params.cond_ii_constant = 0.5 * kappa;
  w.params.cond_iv_constant = 4.0 * kappa;
  w.params.verified = true;
  w.description = {{"name", "kappa_omega"}, {"kappa", kappa}};
  return w;
}

WeightSpec kappa_big_omega(double kappa) {
  if (!(kappa > 0.0 && kappa < 2.0)) throw DomainError("kappa^Omega requires 0 < kappa < 2");
  WeightSpec w;
  w.name = "kappa_Omega(" + fmt_param(kappa) + ")";
  w.rule = [kappa](std::uint64_t, std::uint32_t nu) { return std::pow(kappa, nu); };
  w.local_factor = [kappa](std::uint64_t p) { return 1.0 / (1.0 - kappa / static_cast<double>(p)); };
  w.params.beta = kappa;
  w.params.rho0 = std::max(0.0, std::log2(kappa));
  sample_constants(w);
  w.params.cond_iv_constant = kappa / ((1.0 - kappa / 2.0) * (1.0 - kappa / 2.0));
  w.params.cond_ii_constant = 0.5 * kappa;
  for (auto p : primes_up_to(16))
    if (kappa >= std::pow(static_cast<double>(p), w.params.r)) w.exception_primes.insert(p);
  w.params.verified = false;
  w.description = {{"name", "kappa_Omega"}, {"kappa", kappa}};
  return w;
}

WeightSpec sigma_lambda(double lambda) {
  if (!(lambda > -1.0)) throw DomainError("sigma_lambda requires lambda > -1");
  WeightSpec w;
  w.name = "sigma_lambda(" + fmt_param(lambda) + ")";
  w.rule = [lambda](std::uint64_t p, std::uint32_t nu) {
    const double q = std::pow(static_cast<double>(p), lambda);
    double s = 1.0, t = 1.0;
    for (std::uint32_t j = 1; j <= nu; ++j) {
      t *= q;
      s += t;
    }
    return s;
  };
  const double s0 = lambda > 0.0 ? 1.0 + lambda : 1.0;
  w.local_factor = [lambda, s0](std::uint64_t p) {
    const double pd = static_cast<double>(p);
    return 1.0 / ((1.0 - std::pow(pd, -s0)) * (1.0 - std::pow(pd, lambda - s0)));
  };
  w.params.sigma0 = s0;
  w.params.beta = lambda == 0.0 ? 2.0 : 1.0;
  w.params.rho0 = lambda == 0.0 ? 0.5 : 0.0;
  sample_constants(w);
  w.params.cond_ii_constant = 0.5 * w.params.beta;
  w.params.verified = true;
  w.description = {{"name", "sigma_lambda"}, {"lambda", lambda}};
  return w;
}

WeightSpec euler_phi() {
  WeightSpec w;
  w.name = "phi";
  w.rule = [](std::uint64_t p, std::uint32_t nu) {
    const double pd = static_cast<double>(p);
    return std::pow(pd, nu - 1.0) * (pd - 1.0);
  };
  w.integer_rule = [](std::uint64_t p, std::uint32_t nu) -> std::uint64_t {
    std::uint64_t v = p - 1;
    for (std::uint32_t j = 1; j < nu; ++j)
      if (__builtin_mul_overflow(v, p, &v)) throw CapacityError("phi value overflows 64 bits");
    return v;
  };
  w.local_factor = [](std::uint64_t p) { return 1.0 + 1.0 / static_cast<double>(p); };
  w.params.sigma0 = 2.0;
  w.params.cond_i_constant = 1.0;
  w.params.cond_ii_constant = 0.5;
  w.params.cond_iv_constant = 2.0;  // p/(p-1) at p = 2
  w.params.verified = true;
  w.description = {{"name", "phi"}};
  return w;
}

WeightSpec power(double lambda) {
  if (!(lambda > -1.0)) throw DomainError("n^lambda requires lambda > -1");
  WeightSpec w;
  w.name = "n_lambda(" + fmt_param(lambda) + ")";
  w.rule = [lambda](std::uint64_t p, std::uint32_t nu) {
    return std::pow(static_cast<double>(p), lambda * nu);
  };
  w.local_factor = [](std::uint64_t p) { return 1.0 / (1.0 - 1.0 / static_cast<double>(p)); };
  w.params.sigma0 = 1.0 + lambda;
  w.params.cond_i_constant = 1.0;
  w.params.cond_ii_constant = 0.5;
  w.params.cond_iv_constant = 4.0;
  w.params.verified = true;
  w.description = {{"name", "n_lambda"}, {"lambda", lambda}};
  return w;
}

WeightSpec r2_quarter() {
  WeightSpec w;
  w.name = "r2_4";
  w.integer_rule = [](std::uint64_t p, std::uint32_t nu) -> std::uint64_t {
    if (p == 2) return 1;
    if (p % 4 == 1) return nu + 1;
    return nu % 2 == 0 ? 1 : 0;
  };
  w.rule = [ir = w.integer_rule](std::uint64_t p, std::uint32_t nu) {
    return static_cast<double>(ir(p, nu));
  };
  w.local_factor = [](std::uint64_t p) {
    const double x = 1.0 / static_cast<double>(p);
    if (p == 2) return 1.0 / (1.0 - x);
    if (p % 4 == 1) return 1.0 / ((1.0 - x) * (1.0 - x));
    return 1.0 / (1.0 - x * x);
  };
  w.params.rho0 = 0.5;
  sample_constants(w);
  w.params.cond_ii_constant = 1.0;
  w.params.verified = true;
  w.description = {{"name", "r2_4"}};
  return w;
}

WeightSpec cube_root_powers() {
  WeightSpec w;
  w.name = "cube_root_powers";
  w.rule = [](std::uint64_t p, std::uint32_t nu) {
    return nu == 1 ? 1.0 : std::pow(static_cast<double>(p), nu / 3.0);
  };
  w.local_factor = [](std::uint64_t p) {
    const double pd = static_cast<double>(p);
    const double y = std::pow(pd, -2.0 / 3.0);
    return 1.0 + 1.0 / pd + y * y / (1.0 - y);
  };
  w.params.rho0 = 1.0 / 3.0;
  sample_constants(w);
  w.params.cond_ii_constant = 0.5;
  w.params.verified = true;
  w.description = {{"name", "cube_root_powers"}};
  return w;
}

AdditiveSpec omega() {
  AdditiveSpec f;
  f.name = "omega";
  f.rule = [](std::uint64_t, std::uint32_t) { return 1.0; };
  f.strongly_additive = true;
  f.bound_M = 1.0;
  f.kappa = 0.0;
  f.description = {{"name", "omega"}};
  return f;
}

AdditiveSpec big_omega() {
  AdditiveSpec f;
  f.name = "Omega";
  f.rule = [](std::uint64_t, std::uint32_t nu) { return static_cast<double>(nu); };
  f.strongly_additive = false;
  f.bound_M = 1.0;
  f.kappa = 1.0;
  f.description = {{"name", "Omega"}};
  return f;
}

AdditiveSpec scaled(const AdditiveSpec& f, double c) {
  if (!std::isfinite(c)) throw DomainError("scale factor must be finite");
  AdditiveSpec out = f;
  out.name = fmt_param(c) + "*" + f.name;
  out.rule = [rule = f.rule, c](std::uint64_t p, std::uint32_t nu) { return c * rule(p, nu); };
  // Any positive M bounds the zero function; keep the base's to avoid 1/M = inf.
  out.bound_M = c == 0.0 ? f.bound_M : std::abs(c) * f.bound_M;
  out.description = {{"name", "scaled"}, {"c", c}, {"base", f.description}};
  return out;
}

}  // namespace catalog

const std::vector<std::string>& weight_catalog_names() {
  static const std::vector<std::string> names = {
      "one",      "mu2",      "d_k",  "d_kappa_c", "kappa_omega", "kappa_Omega",
      "sigma_lambda", "phi",  "n_lambda", "r2_4", "rho_g", "tau2", "cube_root_powers"};
  return names;
}

const std::vector<std::string>& additive_catalog_names() {
  static const std::vector<std::string> names = {"omega", "Omega", "scaled"};
  return names;
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

double number_field(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw DomainError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::map<std::pair<std::uint64_t, std::uint32_t>, double> read_overrides(const nlohmann::json& j) {
  std::map<std::pair<std::uint64_t, std::uint32_t>, double> table;
  if (!j.contains("overrides")) return table;
  for (const auto& row : j.at("overrides")) {
    if (!row.is_array() || row.size() != 3)
      throw DomainError("each override must be [p, nu, value]");
    const auto p = row[0].get<std::uint64_t>();
    const auto nu = row[1].get<std::uint32_t>();
    if (p < 2 || nu < 1) throw DomainError("override needs p >= 2 and nu >= 1");
    table[{p, nu}] = row[2].get<double>();
  }
  return table;
}

}  // namespace

WeightSpec weight_from_json(const nlohmann::json& j, const CatalogLimits& limits) {
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string())
    throw DomainError("weight spec must be an object with a 'name'");
  const std::string name = j.at("name").get<std::string>();
  WeightSpec w;
  if (name == "one") {
    w = catalog::one();
  } else if (name == "mu2") {
    w = catalog::mu_squared();
  } else if (name == "d_k") {
    const double k = number_field(j, "k", 2);
    if (k < 1 || k != std::floor(k) || k > 64) throw DomainError("d_k requires integer 1 <= k <= 64");
    w = catalog::divisor_k(static_cast<unsigned>(k));
  } else if (name == "d_kappa_c") {
    w = catalog::divisor_kappa_power(number_field(j, "kappa", 2.0), number_field(j, "c", 1.0));
  } else if (name == "kappa_omega") {
    w = catalog::kappa_omega(number_field(j, "kappa", 2.0));
  } else if (name == "kappa_Omega") {
    w = catalog::kappa_big_omega(number_field(j, "kappa", 1.5));
  } else if (name == "sigma_lambda") {
    w = catalog::sigma_lambda(number_field(j, "lambda", 1.0));
  } else if (name == "phi") {
    w = catalog::euler_phi();
  } else if (name == "n_lambda") {
    w = catalog::power(number_field(j, "lambda", 0.5));
  } else if (name == "r2_4") {
    w = catalog::r2_quarter();
  } else if (name == "rho_g") {
    std::vector<std::int64_t> coeffs = {1, 0, 1};
    if (j.contains("g")) coeffs = j.at("g").get<std::vector<std::int64_t>>();
    const auto c_g = j.contains("c_g") ? j.at("c_g").get<std::int64_t>() : 1;
    w = catalog::rho_g(make_poly(coeffs, c_g), limits);
  } else if (name == "tau2") {
    w = catalog::tau_squared(limits);
  } else if (name == "cube_root_powers") {
    w = catalog::cube_root_powers();
  } else {
    throw DomainError("unknown weight '" + name + "'; catalog: " + join(weight_catalog_names()));
  }
  return with_overrides(std::move(w), read_overrides(j));
}

AdditiveSpec additive_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string())
    throw DomainError("additive spec must be an object with a 'name'");
  const std::string name = j.at("name").get<std::string>();
  AdditiveSpec f;
  if (name == "omega") {
    f = catalog::omega();
  } else if (name == "Omega") {
    f = catalog::big_omega();
  } else if (name == "scaled") {
    if (!j.contains("base")) throw DomainError("scaled additive needs a 'base'");
    f = catalog::scaled(additive_from_json(j.at("base")), number_field(j, "c", 1.0));
  } else {
    throw DomainError("unknown additive '" + name + "'; catalog: " + join(additive_catalog_names()));
  }
  return with_overrides(std::move(f), read_overrides(j));
}

std::vector<WeightSpec> default_catalog(const CatalogLimits& limits) {
  std::vector<WeightSpec> out;
  out.push_back(catalog::one());
  out.push_back(catalog::mu_squared());
  out.push_back(catalog::divisor_k(2));
  out.push_back(catalog::divisor_k(3));
  out.push_back(catalog::divisor_kappa_power(2.0, 0.5));
  out.push_back(catalog::kappa_omega(2.0));
  out.push_back(catalog::kappa_big_omega(1.5));
  out.push_back(catalog::sigma_lambda(1.0));
  out.push_back(catalog::sigma_lambda(-0.5));
  out.push_back(catalog::euler_phi());
  out.push_back(catalog::power(0.5));
  out.push_back(catalog::r2_quarter());
  out.push_back(catalog::rho_g(make_poly({1, 0, 1}), limits));
  out.push_back(catalog::tau_squared(limits));
  out.push_back(catalog::cube_root_powers());
  return out;
}

}  // namespace wekac
