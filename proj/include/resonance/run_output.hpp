#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "resonance/grid.hpp"

namespace resonance {

/// Ordered key/value record describing a run. Written as `key = value` lines.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, int value) { set(key, static_cast<long long>(value)); }
  void set(const std::string& key, std::size_t value) { set(key, static_cast<long long>(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }

  std::optional<std::string> get(const std::string& key) const;
  bool contains(const std::string& key) const { return get(key).has_value(); }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_text() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Time series with named columns; one row per sample.
struct DiagnosticsTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  /// Values of one column; throws InvalidInput for an unknown name.
  std::vector<double> column(const std::string& name) const;
  std::size_t size() const { return rows.size(); }
};

struct MrsSnapshot {
  double time = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

/// Physical-space samples of the complex amplitude.
struct DqsSnapshot {
  double time = 0.0;
  std::vector<Complex> a;
};

enum class FieldLayout { Mrs, Dqs };

/// Snapshot trajectory, diagnostics and manifest of a single solver run.
struct RunOutput {
  RunOutput(FieldLayout l, PeriodicGrid g) : layout(l), grid(g) {}

  FieldLayout layout;
  PeriodicGrid grid;
  Manifest manifest;
  std::vector<MrsSnapshot> mrs_snapshots;
  std::vector<DqsSnapshot> dqs_snapshots;
  DiagnosticsTable diagnostics;

  std::size_t snapshot_count() const {
    return layout == FieldLayout::Mrs ? mrs_snapshots.size() : dqs_snapshots.size();
  }
  std::vector<double> snapshot_times() const;
};

/// Formats with 17 significant digits, which round-trips any double.
std::string format_double(double x);

/// Writes snapshot_NNNN.csv files, diagnostics.csv and manifest.txt into dir
/// (created if missing). Returns the paths written.
std::vector<std::filesystem::path> export_snapshots(const RunOutput& output, const std::filesystem::path& dir);

void write_table_csv(const DiagnosticsTable& table, const std::filesystem::path& path);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

/// Parsed snapshot file: the `# t=` header value, column names and column data.
struct SnapshotFile {
  double time = 0.0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[column][row]
};

SnapshotFile read_snapshot(const std::filesystem::path& path);
DiagnosticsTable read_table_csv(const std::filesystem::path& path);

}  // namespace resonance
