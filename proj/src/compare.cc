#include "stadia/compare.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stadia/config.h"

namespace stadia {
namespace {

MetricTarget ParseTarget(const YAML::Node& n, size_t index) {
  if (!n.IsMap())
    throw ConfigError("targets[" + std::to_string(index) + "]: expected a map");
  MetricTarget t;
  t.key = config::RequireString(n, "key");
  if (n["target"]) {
    t.target = config::RequireDouble(n, "target");
    t.rel_tol = config::GetDouble(n, "rel_tol", 0.0);
    if (t.rel_tol < 0.0) throw ConfigError(t.key + ": rel_tol must be >= 0");
    if (n["min"] || n["max"])
      throw ConfigError(t.key + ": give either target or min/max, not both");
  } else {
    if (n["min"]) t.min = config::RequireDouble(n, "min");
    if (n["max"]) t.max = config::RequireDouble(n, "max");
    if (!t.min && !t.max) throw ConfigError(t.key + ": needs target, min or max");
    if (t.min && t.max && *t.min > *t.max)
      throw ConfigError(t.key + ": min exceeds max");
  }
  t.note = config::GetString(n, "note", "");
  return t;
}

std::string Bound(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", *v);
  return buf;
}

}  // namespace

std::vector<MetricTarget> ParseTargets(const std::string& yaml_text) {
  const YAML::Node root = config::LoadString(yaml_text);
  const YAML::Node list = root["targets"];
  if (!list || !list.IsSequence() || list.size() == 0)
    throw ConfigError("targets: expected a non-empty list");
  std::vector<MetricTarget> out;
  for (size_t i = 0; i < list.size(); ++i) out.push_back(ParseTarget(list[i], i));
  return out;
}

std::vector<MetricTarget> LoadTargets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open targets " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseTargets(buf.str());
}

ComparisonReport Compare(const MetricMap& metrics,
                         const std::vector<MetricTarget>& targets) {
  if (metrics.empty()) throw InsufficientDataError("nothing to compare");
  ComparisonReport report;
  report.pass = true;
  for (const MetricTarget& t : targets) {
    auto it = metrics.find(t.key);
    if (it == metrics.end()) throw std::invalid_argument("unknown metric key '" + t.key + "'");
    MetricResult r{t, it->second, true};
    if (t.target) {
      r.pass = std::abs(r.value - *t.target) <= t.rel_tol * std::abs(*t.target);
    } else {
      if (t.min && r.value < *t.min) r.pass = false;
      if (t.max && r.value > *t.max) r.pass = false;
    }
    report.pass = report.pass && r.pass;
    report.results.push_back(r);
  }
  return report;
}

void WriteComparisonCsv(std::ostream& out, const ComparisonReport& report) {
  out << "key,value,target,rel_tol,min,max,result\n";
  char buf[64];
  for (const MetricResult& r : report.results) {
    std::snprintf(buf, sizeof(buf), "%.6g", r.value);
    out << r.target.key << ',' << buf << ',' << Bound(r.target.target) << ',';
    if (r.target.target) {
      std::snprintf(buf, sizeof(buf), "%.6g", r.target.rel_tol);
      out << buf;
    }
    out << ',' << Bound(r.target.min) << ',' << Bound(r.target.max) << ','
        << (r.pass ? "pass" : "fail") << '\n';
  }
  out << "overall,,,,,," << (report.pass ? "pass" : "fail") << '\n';
}

void WriteComparisonJson(std::ostream& out, const ComparisonReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const MetricResult& r : report.results) {
    nlohmann::ordered_json row{{"key", r.target.key}, {"value", r.value}};
    if (r.target.target) {
      row["target"] = *r.target.target;
      row["rel_tol"] = r.target.rel_tol;
    }
    if (r.target.min) row["min"] = *r.target.min;
    if (r.target.max) row["max"] = *r.target.max;
    if (!r.target.note.empty()) row["note"] = r.target.note;
    row["pass"] = r.pass;
    rows.push_back(row);
  }
  nlohmann::ordered_json j{{"pass", report.pass}, {"metrics", rows}};
  out << j.dump(2) << '\n';
}

}  // namespace stadia
