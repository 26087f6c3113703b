#include "config.hpp"

#include <cmath>
#include <sstream>

#include "wekac/error.hpp"
#include "wekac/moments.hpp"

namespace wekac::cli {

namespace {

double parse_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw DomainError(std::string("bad ") + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

std::vector<double> GridSpec::points() const {
  std::vector<double> out;
  const double span = (hi - lo) / step;
  const auto n = static_cast<std::int64_t>(std::floor(span + 1e-9));
  for (std::int64_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

GridSpec checked_grid(GridSpec g) {
  if (!(g.step > 0) || !(g.hi >= g.lo) || !std::isfinite(g.lo) || !std::isfinite(g.hi))
    throw DomainError("grid needs a <= b and step > 0");
  if ((g.hi - g.lo) / g.step > 1e6) throw DomainError("grid has more than 10^6 points");
  return g;
}

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw DomainError("grid must be a:b:step, got '" + text + "'");
  return checked_grid({parse_double(parts[0], "grid start"), parse_double(parts[1], "grid end"),
                       parse_double(parts[2], "grid step")});
}

std::vector<unsigned> parse_orders(const std::string& text) {
  std::vector<unsigned> out;
  for (const auto& p : split(text, ',')) {
    const double v = parse_double(p, "moment order");
    if (v < 1 || v != std::floor(v) || v > kMaxMomentOrder)
      throw DomainError("moment orders must be integers in [1, 12]");
    out.push_back(static_cast<unsigned>(v));
  }
  if (out.empty()) throw DomainError("no moment orders given");
  return out;
}

std::vector<std::int64_t> parse_coeffs(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& p : split(text, ',')) {
    const double v = parse_double(p, "coefficient");
    if (v != std::floor(v) || std::abs(v) > 9.0e15) throw DomainError("coefficients must be integers");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

void RunConfig::validate() const {
  if (limit < 16) throw DomainError("limit must be at least 16");
  if (orders.empty()) throw DomainError("no moment orders given");
  for (unsigned m : orders)
    if (m < 1 || m > kMaxMomentOrder) throw DomainError("moment orders must be in [1, 12]");
  if (format != "json" && format != "csv" && format != "plot")
    throw DomainError("format must be json, csv or plot");
  if (q < 1) throw DomainError("q must be positive");
  if (v && !(*v >= 1)) throw DomainError("v must be at least 1");
  exec.validate();
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = {{"command", command},
                      {"weight", all_weights ? nlohmann::json("catalog") : weight},
                      {"additive", additive},
                      {"limit", limit},
                      {"m", orders},
                      {"grid", {grid.lo, grid.hi, grid.step}},
                      {"format", format},
                      {"chunk", exec.chunk_size},
                      {"g", g},
                      {"c_g", c_g},
                      {"q", q}};
  j["v"] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  return j;
}

void apply_config_file(RunConfig& cfg, const nlohmann::json& file) {
  if (!file.is_object()) throw DomainError("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : file.items()) {
      if (key == "weight") {
        cfg.weight = value.is_string() ? nlohmann::json{{"name", value}} : value;
        cfg.all_weights = false;
      } else if (key == "additive") {
        cfg.additive = value.is_string() ? nlohmann::json{{"name", value}} : value;
      } else if (key == "limit") {
        cfg.limit = value.get<std::uint64_t>();
      } else if (key == "m") {
        cfg.orders = value.is_string() ? parse_orders(value.get<std::string>())
                                       : value.get<std::vector<unsigned>>();
      } else if (key == "grid") {
        if (value.is_string()) {
          cfg.grid = parse_grid(value.get<std::string>());
        } else {
          const auto v = value.get<std::vector<double>>();
          if (v.size() != 3) throw DomainError("grid must be [a, b, step]");
          cfg.grid = checked_grid(GridSpec{v[0], v[1], v[2]});
        }
      } else if (key == "format") {
        cfg.format = value.get<std::string>();
      } else if (key == "workers") {
        cfg.exec.workers = value.get<unsigned>();
      } else if (key == "chunk") {
        cfg.exec.chunk_size = value.get<std::uint64_t>();
      } else if (key == "out") {
        cfg.out = value.get<std::string>();
      } else if (key == "g") {
        cfg.g = value.is_string() ? parse_coeffs(value.get<std::string>())
                                  : value.get<std::vector<std::int64_t>>();
      } else if (key == "c_g") {
        cfg.c_g = value.get<std::int64_t>();
      } else if (key == "q") {
        cfg.q = value.get<std::uint64_t>();
      } else if (key == "v") {
        cfg.v = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
      } else if (key != "command") {
        throw DomainError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config file: ") + e.what());
  }
}

}  // namespace wekac::cli
