#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wekac/apdist.hpp"
#include "wekac/decomposition.hpp"
#include "wekac/hypotheses.hpp"
#include "wekac/moments.hpp"

namespace wekac {

inline constexpr const char* kSchemaVersion = "wekac.report/1";

/// Shortest text with 17 significant digits, '.' decimal, no locale; "nan",
/// "inf", "-inf" for non-finite values.
std::string format_double(double v);

nlohmann::json to_json(const MomentReport& r);
nlohmann::json to_json(const CdfReport& r);
nlohmann::json to_json(const ConditionReport& r);
nlohmann::json to_json(const AdversarialSet& s, bool include_trace);
nlohmann::json to_json(const ApMomentReport& r);
nlohmann::json to_json(const DiscrepancyReport& r);
nlohmann::json to_json(const ResidualSummary& r);

/// {"schema": ..., "command": ..., "config": ..., "results": ...}
nlohmann::json envelope(const std::string& command, const nlohmann::json& config,
                        const nlohmann::json& results);

/// Two-space indented JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

/// Rows with a header; every float is written with format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  CsvWriter& row();
  CsvWriter& cell(double v);
  CsvWriter& cell(std::uint64_t v);
  CsvWriter& cell(const std::string& v);
  std::string str() const;

 private:
  std::string out_;
  bool fresh_row_ = true;
};

std::string moments_csv(const std::vector<MomentReport>& rows);
std::string cdf_csv(const CdfReport& r);
/// Whitespace-separated columns V, cdf, phi.
std::string cdf_plot_data(const CdfReport& r);
/// A gnuplot script plotting the data file produced by cdf_plot_data.
std::string cdf_plot_script(const std::string& data_file);
struct WeightAudit {
  std::string weight;
  std::vector<ConditionReport> conditions;
};
std::string conditions_csv(const std::vector<WeightAudit>& audits);
std::string adversarial_csv(const AdversarialSet& s);
std::string ap_moments_csv(const std::vector<ApMomentReport>& rows);
std::string discrepancy_csv(const DiscrepancyReport& r);

}  // namespace wekac
