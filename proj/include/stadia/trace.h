#ifndef STADIA_TRACE_H_
#define STADIA_TRACE_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stadia/types.h"

namespace stadia {

// Timestamps are held as integer microseconds: the dataset is a tshark epoch
// export and sub-microsecond digits are rounded half-up on parse.
using Micros = int64_t;

constexpr int kMinPayloadBytes = 1;
constexpr int kMaxPayloadBytes = 65507;
// Allowed disagreement between a record's delta column and the difference of
// consecutive timestamps.
constexpr Micros kDeltaToleranceUs = 10;

inline double ToSeconds(Micros us) { return static_cast<double>(us) * 1e-6; }
Micros SecondsToMicros(double seconds);

struct PacketRecord {
  Micros t_epoch_us = 0;
  Micros delta_us = 0;
  int payload_len = 0;

  double t_seconds() const { return ToSeconds(t_epoch_us); }
  double delta_seconds() const { return ToSeconds(delta_us); }

  friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

struct StreamMeta {
  Game game = Game::kTombRaider;
  Protocol protocol = Protocol::kRtp;
  Direction direction = Direction::kDownlink;
  Codec codec = Codec::kNotAvailable;
  Resolution resolution = Resolution::kNotAvailable;
  DatasetId dataset;
};

struct Trace {
  StreamMeta meta;
  std::vector<PacketRecord> records;
  std::string source;  // file the trace was read from, if any

  double span_seconds() const {
    return records.empty() ? 0.0
                           : ToSeconds(records.back().t_epoch_us -
                                       records.front().t_epoch_us);
  }
};

// Dataset variables Y1..Y8. Only Y1..Y3 feed packet records; the others are
// accepted in a schema and skipped.
enum class Column { kY1 = 1, kY2, kY3, kY4, kY5, kY6, kY7, kY8 };
Column ParseColumn(const std::string& text);
std::string ToString(Column column);

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// Parses whitespace/tab separated packet lines. Blank lines are skipped; a
// missing Y2 column is reconstructed from timestamps. Throws ParseError or
// ValidationError with the 1-based line number.
std::vector<PacketRecord> ParseTraceText(std::istream& in,
                                         const std::vector<Column>& schema);
std::vector<PacketRecord> ParseTraceText(const std::string& text,
                                         const std::vector<Column>& schema);

// Checks the PacketRecord invariants over a whole sequence.
void ValidateRecords(const std::vector<PacketRecord>& records);

// Writes the three-column (Y1 Y2 Y3) dataset format with microsecond digits,
// which ParseTraceText reads back losslessly.
void WriteTraceText(std::ostream& out, const std::vector<PacketRecord>& records);

struct ManifestEntry {
  std::filesystem::path path;
  StreamMeta meta;
  std::vector<Column> schema;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

// Reads the YAML manifest; relative paths resolve against the manifest's
// directory. Throws ConfigError for grammar or invariant violations.
DatasetManifest LoadManifest(const std::filesystem::path& path);
DatasetManifest ParseManifest(const std::string& yaml_text,
                              const std::filesystem::path& base_dir);
void ValidateManifest(const DatasetManifest& manifest);

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Dataset {
 public:
  explicit Dataset(std::vector<Trace> traces) : traces_(std::move(traces)) {}

  const std::vector<Trace>& traces() const { return traces_; }
  std::vector<const Trace*> Find(Game game, Protocol protocol,
                                 Direction direction) const;
  // First trace with the given metadata and dataset id, or nullptr.
  const Trace* FindOne(DatasetId dataset, Game game, Protocol protocol,
                       Direction direction) const;

 private:
  std::vector<Trace> traces_;
};

// Loads every manifest entry. All per-file failures are collected into one
// DatasetError naming each file.
Dataset LoadDataset(const DatasetManifest& manifest);

Trace LoadTraceFile(const std::filesystem::path& path,
                    const std::vector<Column>& schema, const StreamMeta& meta);

}  // namespace stadia

#endif  // STADIA_TRACE_H_
