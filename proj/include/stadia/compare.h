#ifndef STADIA_COMPARE_H_
#define STADIA_COMPARE_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stadia/report_io.h"

namespace stadia {

// One reference value. Either `target` with a relative tolerance, or a
// [min, max] band (either side may be open).
struct MetricTarget {
  std::string key;
  std::optional<double> target;
  double rel_tol = 0.0;
  std::optional<double> min;
  std::optional<double> max;
  std::string note;
};

// Targets file grammar (YAML):
//
//   targets:
//     - {key: load_mbps, target: 25.60, rel_tol: 0.05}
//     - {key: mean_rtt_ms, min: 10.28, max: 12.30, note: "uncongested"}
//
// Throws ConfigError.
std::vector<MetricTarget> LoadTargets(const std::filesystem::path& path);
std::vector<MetricTarget> ParseTargets(const std::string& yaml_text);

struct MetricResult {
  MetricTarget target;
  double value = 0.0;
  bool pass = false;
};

struct ComparisonReport {
  std::vector<MetricResult> results;
  bool pass = false;
};

// Throws std::invalid_argument naming a key missing from `metrics` and
// InsufficientDataError when `metrics` is empty.
ComparisonReport Compare(const MetricMap& metrics,
                         const std::vector<MetricTarget>& targets);

void WriteComparisonCsv(std::ostream& out, const ComparisonReport& report);
void WriteComparisonJson(std::ostream& out, const ComparisonReport& report);

}  // namespace stadia

#endif  // STADIA_COMPARE_H_
