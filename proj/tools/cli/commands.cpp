#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "wekac/apdist.hpp"
#include "wekac/combinatorics.hpp"
#include "wekac/decomposition.hpp"
#include "wekac/error.hpp"
#include "wekac/functions.hpp"
#include "wekac/hypotheses.hpp"
#include "wekac/moments.hpp"
#include "wekac/polynomial.hpp"
#include "wekac/report.hpp"
#include "wekac/sieve.hpp"

namespace wekac::cli {

namespace {

using nlohmann::json;

// Header lines that carry the schema and config into text formats.
std::string text_preamble(const RunConfig& cfg) {
  return std::string("# schema: ") + kSchemaVersion + "\n# config: " + cfg.to_json().dump() + "\n";
}

Rendered render(const RunConfig& cfg, const json& results, const std::function<std::string()>& csv,
                const std::function<std::string()>& plot = {}) {
  if (cfg.format == "json") return {dump_json(envelope(cfg.command, cfg.to_json(), results)), ""};
  if (cfg.format == "csv") return {text_preamble(cfg) + csv(), ""};
  if (!plot) throw DomainError("plot output is not available for '" + cfg.command + "'");
  return {text_preamble(cfg) + plot(), ""};
}

CatalogLimits limits_for(const RunConfig& cfg) {
  CatalogLimits l;
  l.limit = cfg.limit;
  return l;
}

Rendered cmd_moments(const RunConfig& cfg) {
  const SieveTable table(cfg.limit);
  const auto w = weight_from_json(cfg.weight, limits_for(cfg));
  const auto f = additive_from_json(cfg.additive);
  const auto rows = weighted_moments(w, f, cfg.limit, cfg.orders, table, cfg.exec);
  json results = json::array();
  for (const auto& r : rows) results.push_back(to_json(r));
  return render(cfg, results, [&] { return moments_csv(rows); },
                [&] {
                  std::string s = "# m m_xm predicted\n";
                  for (const auto& r : rows)
                    s += std::to_string(r.m) + " " + format_double(r.m_xm) + " " +
                         format_double(r.predicted) + "\n";
                  return s;
                });
}

Rendered cmd_cdf(const RunConfig& cfg) {
  const SieveTable table(cfg.limit);
  const auto w = weight_from_json(cfg.weight, limits_for(cfg));
  const auto f = additive_from_json(cfg.additive);
  const auto report = empirical_cdf(w, f, cfg.limit, cfg.grid.points(), table, cfg.exec);
  Rendered r = render(cfg, to_json(report), [&] { return cdf_csv(report); },
                      [&] { return cdf_plot_data(report); });
  if (cfg.format == "plot" && !cfg.out.empty())
    r.script = cdf_plot_script(std::filesystem::path(cfg.out).filename().string());
  return r;
}

std::vector<std::uint64_t> decade_grid(std::uint64_t limit) {
  if (limit < 1000) throw DomainError("validate needs limit >= 1000");
  std::vector<std::uint64_t> grid;
  for (std::uint64_t x = 1000; x <= limit; x *= 10) grid.push_back(x);
  if (grid.back() != limit) grid.push_back(limit);
  return grid;
}

Rendered cmd_validate(const RunConfig& cfg) {
  const SieveTable table(cfg.limit);
  std::vector<WeightSpec> weights;
  if (cfg.all_weights)
    weights = default_catalog(limits_for(cfg));
  else
    weights.push_back(weight_from_json(cfg.weight, limits_for(cfg)));
  const auto grid = decade_grid(cfg.limit);

  std::vector<WeightAudit> audits;
  json results = json::array();
  for (const auto& w : weights) {
    WeightAudit a{w.name,
                  {check_i(w, cfg.limit), check_ii(w, grid, table), check_iii(w, cfg.limit),
                   check_iv(w, cfg.limit)}};
    json conditions = json::array();
    bool pass = true;
    for (const auto& c : a.conditions) {
      conditions.push_back(to_json(c));
      pass = pass && c.pass;
    }
    results.push_back({{"weight", w.name},
                       {"description", w.description},
                       {"verified_constants", w.params.verified},
                       {"pass", pass},
                       {"conditions", conditions}});
    audits.push_back(std::move(a));
  }
  return render(cfg, results, [&] { return conditions_csv(audits); });
}

Rendered cmd_decompose(const RunConfig& cfg) {
  const SieveTable table(cfg.limit);
  const auto w = weight_from_json(cfg.weight, limits_for(cfg));
  const auto f = additive_from_json(cfg.additive);
  const unsigned m = *std::max_element(cfg.orders.begin(), cfg.orders.end());
  const double x = static_cast<double>(cfg.limit);

  const std::uint64_t Q0 = compute_Q0(w);
  const double v = cfg.v ? *cfg.v : default_v(w.params, m, x);
  const auto params = make_params(x, v, Q0, m);
  const LocalFactorTable lft(w, std::min<std::uint64_t>(cfg.limit, 1000000));
  const double A_x = mean_A(w, f, cfg.limit, table);
  const ResidualModel model(f, lft, params, A_x, table);
  const auto summary = residual_scan(model, cfg.limit, table, cfg.exec);
  const double g_err = g_identity_max_error(f, lft, Q0, std::min<std::uint64_t>(cfg.limit, 10000),
                                            200, 4, 3, 1);

  json results = {{"Q0", Q0},
                  {"v", params.v},
                  {"z", params.z},
                  {"w", params.w},
                  {"m", m},
                  {"residual_max", summary.residual_max},
                  {"excess_max", summary.excess_max},
                  {"fitted_c", summary.fitted_c},
                  {"G_identity_max_error", g_err}};
  return render(cfg, results, [&] {
    CsvWriter out({"Q0", "v", "z", "w", "m", "residual_max", "excess_max", "fitted_c",
                   "G_identity_max_error"});
    out.row().cell(Q0).cell(params.v).cell(params.z).cell(params.w).cell(std::uint64_t{m})
        .cell(summary.residual_max).cell(summary.excess_max).cell(summary.fitted_c).cell(g_err);
    return out.str();
  });
}

Rendered cmd_apdist(const RunConfig& cfg) {
  const SieveTable table(cfg.limit);
  const auto w = weight_from_json(cfg.weight, limits_for(cfg));
  const auto f = additive_from_json(cfg.additive);
  const auto g = make_poly(cfg.g, cfg.c_g);
  const auto rows = moment_fg(w, f, g, cfg.limit, cfg.orders, table, cfg.exec);
  std::optional<DiscrepancyReport> disc;
  if (cfg.q > 1) disc = discrepancy_report(w, cfg.limit, cfg.q, table, cfg.exec);

  json moments = json::array();
  for (const auto& r : rows) moments.push_back(to_json(r));
  json results = {{"g", cfg.g},
                  {"c_g", cfg.c_g},
                  {"q", cfg.q},
                  {"moments", moments},
                  {"discrepancy", disc ? to_json(*disc) : json(nullptr)}};
  return render(cfg, results, [&] {
    std::string s = ap_moments_csv(rows);
    if (disc) s += "\n" + discrepancy_csv(*disc);
    return s;
  });
}

Rendered cmd_counterexample(const RunConfig& cfg) {
  const auto set = build_adversarial_set(cfg.limit);
  return render(cfg, to_json(set, true), [&] { return adversarial_csv(set); },
                [&] {
                  std::string s = "# p_considered s_P u\n";
                  for (const auto& r : set.trace)
                    s += std::to_string(r.p_considered) + " " + format_double(r.s_P) + " " +
                         format_double(r.u) + "\n";
                  return s;
                });
}

Rendered cmd_predict(const RunConfig& cfg) {
  const SieveTable table(cfg.limit);
  const auto w = weight_from_json(cfg.weight, limits_for(cfg));
  const auto f = additive_from_json(cfg.additive);
  const double A = mean_A(w, f, cfg.limit, table);
  const double B = variance_B(w, f, cfg.limit, table);
  const double Bs = B_star(B, static_cast<double>(cfg.limit), w.params.beta);

  json results = json::array();
  CsvWriter csv({"x", "m", "a_x", "b_x", "b_star_x", "c_m", "mu_m", "chi_m", "predicted"});
  for (unsigned m : cfg.orders) {
    const auto gc = gaussian_constants(m);
    const double pred = predicted_moment(m, B);
    results.push_back({{"x", cfg.limit},
                       {"m", m},
                       {"a_x", A},
                       {"b_x", B},
                       {"b_star_x", Bs},
                       {"c_m", gc.C_m},
                       {"mu_m", gc.mu_m},
                       {"chi_m", gc.chi_m},
                       {"predicted", pred}});
    csv.row().cell(cfg.limit).cell(std::uint64_t{m}).cell(A).cell(B).cell(Bs).cell(gc.C_m)
        .cell(gc.mu_m).cell(static_cast<double>(gc.chi_m)).cell(pred);
  }
  return render(cfg, results, [&] { return csv.str(); });
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DomainError("failed writing '" + path + "'");
}

}  // namespace

Rendered run(const RunConfig& cfg) {
  cfg.validate();
  static const std::map<std::string, Rendered (*)(const RunConfig&)> table = {
      {"moments", cmd_moments},   {"cdf", cmd_cdf},
      {"validate", cmd_validate}, {"decompose", cmd_decompose},
      {"apdist", cmd_apdist},     {"counterexample", cmd_counterexample},
      {"predict", cmd_predict}};
  const auto it = table.find(cfg.command);
  if (it == table.end()) throw DomainError("unknown subcommand '" + cfg.command + "'");
  return it->second(cfg);
}

CliResult run_cli(const std::vector<std::string>& args) {
  CliResult result;
  CLI::App app{"Weighted moments of additive functions", "wekac"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.exec = ExecContext::from_env();
  std::string weight = "one", additive = "omega", orders, grid, format, config_path, coeffs;
  std::optional<double> k, kappa, c, lambda, scale, v;
  std::optional<std::int64_t> c_g;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"moments", "Weighted centered moments against the Gaussian prediction"},
      {"cdf", "Weighted distribution of (f - A)/sqrt(B) and its KS distance"},
      {"validate", "Audit class conditions (i)-(iv) for a weight"},
      {"decompose", "Local-factor decomposition diagnostics"},
      {"apdist", "Moments of f(g(n)) and discrepancies in residue classes"},
      {"counterexample", "Greedy adversarial prime set trace"},
      {"predict", "Predicted Gaussian moments from prime sums only"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--weight", weight, "Catalog weight name ('all' for validate)");
    sub->add_option("--k", k, "Parameter k of d_k");
    sub->add_option("--kappa", kappa, "Parameter kappa");
    sub->add_option("--c", c, "Exponent c of d_kappa_c");
    sub->add_option("--lambda", lambda, "Parameter lambda");
    sub->add_option("--g", coeffs, "Polynomial coefficients, ascending, comma separated");
    sub->add_option("--c-g", c_g, "Denominator-clearing constant of g");
    sub->add_option("--additive", additive, "Catalog additive function name");
    sub->add_option("--scale", scale, "Multiply the additive function by this constant");
    sub->add_option("--limit", cfg.limit, "Upper limit x");
    sub->add_option("--m", orders, "Moment orders, comma separated");
    sub->add_option("--grid", grid, "V grid a:b:step");
    sub->add_option("--format", format, "json, csv or plot");
    sub->add_option("--workers", cfg.exec.workers, "Worker threads");
    sub->add_option("--chunk", cfg.exec.chunk_size, "Chunk size (power of two)");
    sub->add_option("--out", cfg.out, "Output path (default stdout)");
    sub->add_option("--config", config_path, "JSON config file; its keys override flags");
    sub->add_option("--q", cfg.q, "Modulus for residue-class discrepancies");
    sub->add_option("--v", v, "Decomposition parameter v");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = 2;
    result.err = std::string(e.what()) + "\n";
    return result;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (weight == "all") {
      if (cfg.command != "validate") throw DomainError("--weight all is only valid for validate");
      cfg.all_weights = true;
    }
    cfg.weight = {{"name", weight}};
    if (k) cfg.weight["k"] = *k;
    if (kappa) cfg.weight["kappa"] = *kappa;
    if (c) cfg.weight["c"] = *c;
    if (lambda) cfg.weight["lambda"] = *lambda;
    if (!coeffs.empty()) {
      cfg.g = parse_coeffs(coeffs);
      if (weight == "rho_g") cfg.weight["g"] = cfg.g;
    }
    if (c_g) {
      cfg.c_g = *c_g;
      if (weight == "rho_g") cfg.weight["c_g"] = *c_g;
    }
    cfg.additive = {{"name", additive}};
    if (scale) cfg.additive = {{"name", "scaled"}, {"base", cfg.additive}, {"c", *scale}};
    if (!orders.empty()) cfg.orders = parse_orders(orders);
    if (!grid.empty()) cfg.grid = parse_grid(grid);
    cfg.v = v;
    cfg.format = !format.empty() ? format : (cfg.command == "counterexample" ? "csv" : "json");

    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw DomainError("cannot read config file '" + config_path + "'");
      json file;
      try {
        file = json::parse(in);
      } catch (const json::exception& e) {
        throw DomainError("config file '" + config_path + "': " + e.what());
      }
      apply_config_file(cfg, file);
    }

    const Rendered rendered = run(cfg);
    if (cfg.out.empty()) {
      result.out = rendered.text;
    } else {
      write_file(cfg.out, rendered.text);
      if (!rendered.script.empty()) write_file(cfg.out + ".gp", rendered.script);
    }
  } catch (const CapacityError& e) {
    result.exit_code = 3;
    result.err = std::string("capacity error: ") + e.what() + "\n";
  } catch (const DomainError& e) {
    result.exit_code = 2;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const Error& e) {
    result.exit_code = 2;
    result.err = std::string("error: ") + e.what() + "\n";
  }
  return result;
}

}  // namespace wekac::cli
