#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wekac/exec.hpp"

namespace wekac::cli {

struct GridSpec {
  double lo = -3.0;
  double hi = 3.0;
  double step = 0.25;
  std::vector<double> points() const;
};

/// Everything a subcommand needs, after flags and the config file are merged.
struct RunConfig {
  std::string command;
  nlohmann::json weight = {{"name", "one"}};
  nlohmann::json additive = {{"name", "omega"}};
  std::uint64_t limit = 1000000;
  std::vector<unsigned> orders = {1, 2, 3, 4};
  GridSpec grid;
  std::string format = "json";
  ExecContext exec;
  std::string out;  // empty: stdout

  std::vector<std::int64_t> g = {1, 0, 1};
  std::int64_t c_g = 1;
  std::uint64_t q = 1;
  std::optional<double> v;
  bool all_weights = false;  // validate: audit the whole default catalog

  void validate() const;
  /// The resolved configuration embedded in every report. Worker count and
  /// output path are left out so reports are byte-identical across both.
  nlohmann::json to_json() const;
};

GridSpec checked_grid(GridSpec g);
GridSpec parse_grid(const std::string& text);
std::vector<unsigned> parse_orders(const std::string& text);
std::vector<std::int64_t> parse_coeffs(const std::string& text);

/// Applies a JSON config file on top of `cfg`; keys in the file win.
void apply_config_file(RunConfig& cfg, const nlohmann::json& file);

}  // namespace wekac::cli
