#include "wekac/report.hpp"

#include <charconv>
#include <cmath>

namespace wekac {

namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json numbers(const std::vector<double>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (double d : v) out.push_back(number(d));
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const MomentReport& r) {
  return {{"x", r.x},
          {"m", r.m},
          {"s_x", number(r.s_x)},
          {"a_x", number(r.a_x)},
          {"b_x", number(r.b_x)},
          {"b_star_x", number(r.b_star_x)},
          {"m_xm", number(r.m_xm)},
          {"predicted", number(r.predicted)},
          {"normalized_residual", number(r.normalized_residual)},
          {"empirical_mean", number(r.empirical_mean)},
          {"m_xm_empirical", number(r.m_xm_empirical)}};
}

nlohmann::json to_json(const CdfReport& r) {
  return {{"x", r.x},
          {"s_x", number(r.s_x)},
          {"a_x", number(r.a_x)},
          {"b_x", number(r.b_x)},
          {"grid", numbers(r.grid)},
          {"cdf", numbers(r.cdf)},
          {"phi", numbers(r.phi)},
          {"ks_distance", number(r.ks_distance)},
          {"ks_location", number(r.ks_location)}};
}

nlohmann::json to_json(const ConditionReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points)
    pts.push_back({{"at", number(p.at)}, {"value", number(p.value)}, {"scaled", number(p.scaled)}});
  nlohmann::json j = {{"condition", r.condition},
                      {"pass", r.pass},
                      {"measured", number(r.measured)},
                      {"declared", number(r.declared)},
                      {"slack", number(r.slack)},
                      {"points", pts},
                      {"violators", r.violators},
                      {"note", r.note}};
  if (r.condition == "ii") j["beta_hat"] = number(r.beta_hat);
  return j;
}

nlohmann::json to_json(const AdversarialSet& s, bool include_trace) {
  nlohmann::json j = {{"first_element", s.primes.empty() ? 0 : s.primes.front()},
                      {"size", s.primes.size()},
                      {"max_gap", number(s.max_gap)},
                      {"sign_changes", s.sign_changes}};
  if (!s.trace.empty()) {
    j["final_s_p"] = number(s.trace.back().s_P);
    j["final_u"] = number(s.trace.back().u);
  }
  if (include_trace) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : s.trace)
      rows.push_back({{"p_considered", r.p_considered},
                      {"included", r.included},
                      {"s_p", number(r.s_P)},
                      {"u", number(r.u)}});
    j["trace"] = rows;
  }
  return j;
}

nlohmann::json to_json(const ApMomentReport& r) {
  return {{"x", r.x},
          {"m", r.m},
          {"s_x", number(r.s_x)},
          {"a_fg", number(r.a_fg)},
          {"b_fg", number(r.b_fg)},
          {"m_fg", number(r.m_fg)},
          {"predicted", number(r.predicted)},
          {"normalized_residual", number(r.normalized_residual)}};
}

nlohmann::json to_json(const DiscrepancyReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < r.residues.size(); ++i)
    rows.push_back({{"a", r.residues[i]}, {"delta", number(r.deltas[i])}});
  return {{"x", r.x},
          {"q", r.q},
          {"normalizer", number(r.normalizer)},
          {"max_abs", number(r.max_abs)},
          {"residues", rows}};
}

nlohmann::json to_json(const ResidualSummary& r) {
  return {{"n_max", r.n_max},
          {"residual_max", number(r.residual_max)},
          {"excess_max", number(r.excess_max)},
          {"fitted_c", number(r.fitted_c)}};
}

nlohmann::json envelope(const std::string& command, const nlohmann::json& config,
                        const nlohmann::json& results) {
  return {{"schema", kSchemaVersion}, {"command", command}, {"config", config}, {"results", results}};
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

CsvWriter::CsvWriter(std::vector<std::string> header) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ += (i ? "," : "") + header[i];
  out_ += "\n";
}

CsvWriter& CsvWriter::row() {
  if (!fresh_row_) out_ += "\n";
  fresh_row_ = true;
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (!fresh_row_) out_ += ",";
  out_ += v;
  fresh_row_ = false;
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_double(v)); }
CsvWriter& CsvWriter::cell(std::uint64_t v) { return cell(std::to_string(v)); }

std::string CsvWriter::str() const { return fresh_row_ ? out_ : out_ + "\n"; }

std::string moments_csv(const std::vector<MomentReport>& rows) {
  CsvWriter w({"x", "m", "s_x", "a_x", "b_x", "b_star_x", "m_xm", "predicted", "normalized_residual",
               "empirical_mean", "m_xm_empirical"});
  for (const auto& r : rows)
    w.row().cell(r.x).cell(std::uint64_t{r.m}).cell(r.s_x).cell(r.a_x).cell(r.b_x).cell(r.b_star_x)
        .cell(r.m_xm).cell(r.predicted).cell(r.normalized_residual).cell(r.empirical_mean)
        .cell(r.m_xm_empirical);
  return w.str();
}

std::string cdf_csv(const CdfReport& r) {
  CsvWriter w({"x", "v", "cdf", "phi", "ks_distance"});
  for (std::size_t i = 0; i < r.grid.size(); ++i)
    w.row().cell(r.x).cell(r.grid[i]).cell(r.cdf[i]).cell(r.phi[i]).cell(r.ks_distance);
  return w.str();
}

std::string cdf_plot_data(const CdfReport& r) {
  std::string out = "# V cdf phi\n";
  for (std::size_t i = 0; i < r.grid.size(); ++i)
    out += format_double(r.grid[i]) + " " + format_double(r.cdf[i]) + " " + format_double(r.phi[i]) + "\n";
  return out;
}

std::string cdf_plot_script(const std::string& data_file) {
  return "set xlabel 'V'\n"
         "set ylabel 'cumulative weight'\n"
         "set key left top\n"
         "plot '" + data_file + "' using 1:2 with steps title 'empirical', \\\n"
         "     '" + data_file + "' using 1:3 with lines title 'Phi(V)'\n";
}

std::string conditions_csv(const std::vector<WeightAudit>& audits) {
  CsvWriter w({"weight", "condition", "at", "value", "scaled", "declared", "pass"});
  for (const auto& a : audits)
    for (const auto& r : a.conditions)
      for (const auto& p : r.points)
        w.row().cell(a.weight).cell(r.condition).cell(p.at).cell(p.value).cell(p.scaled)
            .cell(r.declared).cell(std::string(r.pass ? "true" : "false"));
  return w.str();
}

std::string adversarial_csv(const AdversarialSet& s) {
  CsvWriter w({"p_considered", "included", "s_P", "u"});
  for (const auto& r : s.trace)
    w.row().cell(r.p_considered).cell(std::uint64_t{r.included ? 1u : 0u}).cell(r.s_P).cell(r.u);
  return w.str();
}

std::string ap_moments_csv(const std::vector<ApMomentReport>& rows) {
  CsvWriter w({"x", "m", "s_x", "a_fg", "b_fg", "m_fg", "predicted", "normalized_residual"});
  for (const auto& r : rows)
    w.row().cell(r.x).cell(std::uint64_t{r.m}).cell(r.s_x).cell(r.a_fg).cell(r.b_fg).cell(r.m_fg)
        .cell(r.predicted).cell(r.normalized_residual);
  return w.str();
}

std::string discrepancy_csv(const DiscrepancyReport& r) {
  CsvWriter w({"x", "q", "a", "delta"});
  for (std::size_t i = 0; i < r.residues.size(); ++i)
    w.row().cell(r.x).cell(r.q).cell(r.residues[i]).cell(r.deltas[i]);
  return w.str();
}

}  // namespace wekac
