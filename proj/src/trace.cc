#include "stadia/trace.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

#include "stadia/config.h"

namespace stadia {
namespace {

bool IsBlank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

// Exact decimal -> microseconds. Plain "[-]int[.frac]" is handled digit by
// digit; anything else (exponents) goes through double.
std::optional<Micros> ParseMicros(const std::string& text) {
  size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  const size_t int_begin = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
    ++pos;
  const size_t int_end = pos;
  size_t frac_begin = pos, frac_end = pos;
  if (pos < text.size() && text[pos] == '.') {
    frac_begin = ++pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    frac_end = pos;
  }
  if (pos == text.size() && (int_end > int_begin || frac_end > frac_begin)) {
    Micros whole = 0;
    if (int_end > int_begin) {
      auto [ptr, ec] =
          std::from_chars(text.data() + int_begin, text.data() + int_end, whole);
      if (ec != std::errc() || whole > INT64_MAX / 1'000'000) return std::nullopt;
    }
    Micros frac = 0;
    int digits = 0;
    bool round_up = false;
    for (size_t i = frac_begin; i < frac_end; ++i) {
      const int d = text[i] - '0';
      if (digits < 6) {
        frac = frac * 10 + d;
        ++digits;
      } else if (digits == 6) {
        round_up = d >= 5;
        ++digits;
      }
    }
    while (digits < 6) {
      frac *= 10;
      ++digits;
    }
    Micros value = whole * 1'000'000 + frac + (round_up ? 1 : 0);
    return negative ? -value : value;
  }
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value))
    return std::nullopt;
  return static_cast<Micros>(std::llround(value * 1e6));
}

std::optional<long long> ParseInteger(const std::string& text) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

bool IsNumber(const std::string& text) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

void CheckRecord(const PacketRecord& r, const PacketRecord* prev, int line) {
  if (r.payload_len < kMinPayloadBytes || r.payload_len > kMaxPayloadBytes)
    throw ValidationError(line, "payload length " +
                                    std::to_string(r.payload_len) +
                                    " outside [1, 65507]");
  if (r.delta_us < 0) throw ValidationError(line, "negative delta");
  if (prev != nullptr) {
    const Micros diff = r.t_epoch_us - prev->t_epoch_us;
    if (diff < 0) throw ValidationError(line, "timestamp decreases");
    if (std::llabs(r.delta_us - diff) > kDeltaToleranceUs)
      throw ValidationError(line,
                            "delta disagrees with timestamp difference by " +
                                std::to_string(std::llabs(r.delta_us - diff)) +
                                " us");
  }
}

std::string LineError(int line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

Micros SecondsToMicros(double seconds) {
  return static_cast<Micros>(std::llround(seconds * 1e6));
}

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error(LineError(line, what)), line_(line) {}

ValidationError::ValidationError(int line, const std::string& what)
    : std::runtime_error(LineError(line, what)), line_(line) {}

Column ParseColumn(const std::string& text) {
  if (text.size() == 2 && (text[0] == 'Y' || text[0] == 'y') && text[1] >= '1' &&
      text[1] <= '8')
    return static_cast<Column>(text[1] - '0');
  throw ConfigError("unknown column '" + text + "' (expected Y1..Y8)");
}

std::string ToString(Column column) {
  return "Y" + std::to_string(static_cast<int>(column));
}

std::vector<PacketRecord> ParseTraceText(std::istream& in,
                                         const std::vector<Column>& schema) {
  if (schema.empty()) throw ConfigError("empty column schema");
  int t_col = -1, delta_col = -1, len_col = -1;
  for (size_t i = 0; i < schema.size(); ++i) {
    if (schema[i] == Column::kY1) t_col = static_cast<int>(i);
    if (schema[i] == Column::kY2) delta_col = static_cast<int>(i);
    if (schema[i] == Column::kY3) len_col = static_cast<int>(i);
  }
  if (t_col < 0 || len_col < 0)
    throw ConfigError("packet traces need Y1 and Y3 in the schema");

  std::vector<PacketRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    const std::vector<std::string> fields = SplitFields(line);
    if (fields.size() != schema.size())
      throw ParseError(line_no, "expected " + std::to_string(schema.size()) +
                                    " columns, found " +
                                    std::to_string(fields.size()));
    for (size_t i = 0; i < fields.size(); ++i) {
      if (!IsNumber(fields[i]) && !ParseMicros(fields[i]))
        throw ParseError(line_no, "non-numeric field '" + fields[i] + "'");
    }
    PacketRecord r;
    const auto t = ParseMicros(fields[t_col]);
    if (!t) throw ParseError(line_no, "bad timestamp '" + fields[t_col] + "'");
    r.t_epoch_us = *t;
    const auto len = ParseInteger(fields[len_col]);
    if (!len) throw ParseError(line_no, "bad length '" + fields[len_col] + "'");
    if (*len < kMinPayloadBytes || *len > kMaxPayloadBytes)
      throw ValidationError(line_no, "payload length " + fields[len_col] +
                                         " outside [1, 65507]");
    r.payload_len = static_cast<int>(*len);
    if (delta_col >= 0) {
      const auto delta = ParseMicros(fields[delta_col]);
      if (!delta)
        throw ParseError(line_no, "bad delta '" + fields[delta_col] + "'");
      r.delta_us = *delta;
    } else {
      r.delta_us = records.empty() ? 0 : r.t_epoch_us - records.back().t_epoch_us;
    }
    CheckRecord(r, records.empty() ? nullptr : &records.back(), line_no);
    records.push_back(r);
  }
  return records;
}

std::vector<PacketRecord> ParseTraceText(const std::string& text,
                                         const std::vector<Column>& schema) {
  std::istringstream in(text);
  return ParseTraceText(in, schema);
}

void ValidateRecords(const std::vector<PacketRecord>& records) {
  for (size_t i = 0; i < records.size(); ++i)
    CheckRecord(records[i], i == 0 ? nullptr : &records[i - 1],
                static_cast<int>(i + 1));
}

void WriteTraceText(std::ostream& out,
                    const std::vector<PacketRecord>& records) {
  auto put = [&out](Micros us) {
    if (us < 0) {
      out << '-';
      us = -us;
    }
    out << us / 1'000'000 << '.' << std::setw(6) << std::setfill('0')
        << us % 1'000'000;
  };
  for (const PacketRecord& r : records) {
    put(r.t_epoch_us);
    out << '\t';
    put(r.delta_us);
    out << '\t' << r.payload_len << '\n';
  }
}

DatasetManifest ParseManifest(const std::string& yaml_text,
                              const std::filesystem::path& base_dir) {
  const YAML::Node root = config::LoadString(yaml_text);
  const YAML::Node traces = root["traces"];
  if (!traces || !traces.IsSequence())
    throw ConfigError("manifest needs a 'traces' list");
  DatasetManifest manifest;
  for (const YAML::Node& node : traces) {
    ManifestEntry entry;
    entry.path = config::RequireString(node, "path");
    if (entry.path.is_relative()) entry.path = base_dir / entry.path;
    entry.path = entry.path.lexically_normal();
    entry.meta.game = ParseGame(config::RequireString(node, "game"));
    entry.meta.protocol = ParseProtocol(config::RequireString(node, "protocol"));
    entry.meta.direction =
        ParseDirection(config::RequireString(node, "direction"));
    entry.meta.codec = ParseCodec(config::GetString(node, "codec", "NA"));
    entry.meta.resolution =
        ParseResolution(config::GetString(node, "resolution", "NA"));
    entry.meta.dataset = ParseDatasetId(config::RequireString(node, "dataset"));
    if (const YAML::Node schema = node["schema"]) {
      if (!schema.IsSequence()) throw ConfigError("'schema' must be a list");
      for (const YAML::Node& col : schema)
        entry.schema.push_back(ParseColumn(col.as<std::string>()));
    } else {
      entry.schema = {Column::kY1, Column::kY2, Column::kY3};
    }
    manifest.entries.push_back(std::move(entry));
  }
  ValidateManifest(manifest);
  return manifest;
}

DatasetManifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseManifest(buffer.str(), path.parent_path());
}

void ValidateManifest(const DatasetManifest& manifest) {
  std::set<std::filesystem::path> seen;
  for (const ManifestEntry& entry : manifest.entries) {
    if (!seen.insert(entry.path.lexically_normal()).second)
      throw ConfigError("duplicate manifest path " + entry.path.string());
    if (entry.schema.empty())
      throw ConfigError(entry.path.string() + ": empty schema");
    const auto has = [&](Column c) {
      return std::find(entry.schema.begin(), entry.schema.end(), c) !=
             entry.schema.end();
    };
    if ((has(Column::kY2) || has(Column::kY3)) && !has(Column::kY1))
      throw ConfigError(entry.path.string() +
                        ": schema with Y2/Y3 must include Y1");
    std::set<Column> unique(entry.schema.begin(), entry.schema.end());
    if (unique.size() != entry.schema.size())
      throw ConfigError(entry.path.string() + ": repeated schema column");
  }
}

Trace LoadTraceFile(const std::filesystem::path& path,
                    const std::vector<Column>& schema, const StreamMeta& meta) {
  std::ifstream in(path);
  if (!in) throw DatasetError("missing file " + path.string());
  Trace trace;
  trace.meta = meta;
  trace.source = path.string();
  trace.records = ParseTraceText(in, schema);
  return trace;
}

Dataset LoadDataset(const DatasetManifest& manifest) {
  ValidateManifest(manifest);
  std::vector<Trace> traces;
  std::string errors;
  for (const ManifestEntry& entry : manifest.entries) {
    try {
      Trace trace = LoadTraceFile(entry.path, entry.schema, entry.meta);
      if (trace.records.empty())
        throw DatasetError("no packet records");
      traces.push_back(std::move(trace));
    } catch (const std::exception& e) {
      errors += entry.path.string() + ": " + e.what() + "\n";
    }
  }
  if (!errors.empty()) throw DatasetError("failed to load dataset:\n" + errors);
  return Dataset(std::move(traces));
}

std::vector<const Trace*> Dataset::Find(Game game, Protocol protocol,
                                        Direction direction) const {
  std::vector<const Trace*> out;
  for (const Trace& t : traces_) {
    if (t.meta.game == game && t.meta.protocol == protocol &&
        t.meta.direction == direction)
      out.push_back(&t);
  }
  return out;
}

const Trace* Dataset::FindOne(DatasetId dataset, Game game, Protocol protocol,
                              Direction direction) const {
  for (const Trace& t : traces_) {
    if (t.meta.dataset == dataset && t.meta.game == game &&
        t.meta.protocol == protocol && t.meta.direction == direction)
      return &t;
  }
  return nullptr;
}

}  // namespace stadia
