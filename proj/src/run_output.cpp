#include "resonance/run_output.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance {

namespace fs = std::filesystem;

void Manifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) { set(key, format_double(value)); }

void Manifest::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

std::optional<std::string> Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string Manifest::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

void DiagnosticsTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw InvalidInput("diagnostics row width does not match columns");
  rows.push_back(std::move(row));
}

std::vector<double> DiagnosticsTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }
  throw InvalidInput("unknown diagnostics column '" + name + "'");
}

std::vector<double> RunOutput::snapshot_times() const {
  std::vector<double> t;
  if (layout == FieldLayout::Mrs) {
    for (const auto& s : mrs_snapshots) t.push_back(s.time);
  } else {
    for (const auto& s : dqs_snapshots) t.push_back(s.time);
  }
  return t;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

void check_written(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

std::string snapshot_name(std::size_t i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu.csv", i);
  return buf;
}

std::vector<double> parse_row(const std::string& line, const fs::path& path) {
  std::vector<double> row;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    const std::string cell = line.substr(pos, end - pos);
    char* stop = nullptr;
    const double v = std::strtod(cell.c_str(), &stop);
    if (cell.empty() || stop == cell.c_str()) throw IoError("malformed number '" + cell + "' in " + path.string());
    row.push_back(v);
    pos = end + 1;
  }
  return row;
}

std::vector<std::string> split_header(const std::string& line) {
  std::vector<std::string> cols;
  std::stringstream ss(line);
  std::string c;
  while (std::getline(ss, c, ',')) cols.push_back(c);
  return cols;
}

}  // namespace

void write_table_csv(const DiagnosticsTable& table, const fs::path& path) {
  auto os = open_for_write(path);
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& r : table.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_double(r[c]);
    os << '\n';
  }
  check_written(os, path);
}

void write_manifest(const Manifest& manifest, const fs::path& path) {
  auto os = open_for_write(path);
  os << manifest.to_text();
  check_written(os, path);
}

std::vector<fs::path> export_snapshots(const RunOutput& output, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

  std::vector<fs::path> written;
  const auto xs = output.grid.coordinates();
  const std::size_t count = output.snapshot_count();
  for (std::size_t i = 0; i < count; ++i) {
    const fs::path path = dir / snapshot_name(i);
    auto os = open_for_write(path);
    if (output.layout == FieldLayout::Mrs) {
      const auto& s = output.mrs_snapshots[i];
      os << "# t=" << format_double(s.time) << '\n' << "x,u,v\n";
      for (std::size_t j = 0; j < xs.size(); ++j)
        os << format_double(xs[j]) << ',' << format_double(s.u[j]) << ',' << format_double(s.v[j]) << '\n';
    } else {
      const auto& s = output.dqs_snapshots[i];
      os << "# t=" << format_double(s.time) << '\n' << "z,re_a,im_a,abs_a\n";
      for (std::size_t j = 0; j < xs.size(); ++j)
        os << format_double(xs[j]) << ',' << format_double(s.a[j].real()) << ',' << format_double(s.a[j].imag())
           << ',' << format_double(std::abs(s.a[j])) << '\n';
    }
    check_written(os, path);
    written.push_back(path);
  }

  write_table_csv(output.diagnostics, dir / "diagnostics.csv");
  written.push_back(dir / "diagnostics.csv");

  Manifest m = output.manifest;
  std::string times;
  for (double t : output.snapshot_times()) times += (times.empty() ? "" : " ") + format_double(t);
  m.set("snapshot_count", count);
  m.set("snapshot_times", times);
  write_manifest(m, dir / "manifest.txt");
  written.push_back(dir / "manifest.txt");
  return written;
}

SnapshotFile read_snapshot(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  SnapshotFile f;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# t=", 0) != 0) throw IoError("missing '# t=' header in " + path.string());
  f.time = std::strtod(line.c_str() + 4, nullptr);
  if (!std::getline(is, line)) throw IoError("missing column header in " + path.string());
  f.columns = split_header(line);
  f.data.assign(f.columns.size(), {});
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto row = parse_row(line, path);
    if (row.size() != f.columns.size()) throw IoError("row width mismatch in " + path.string());
    for (std::size_t c = 0; c < row.size(); ++c) f.data[c].push_back(row[c]);
  }
  return f;
}

DiagnosticsTable read_table_csv(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  DiagnosticsTable t;
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty table " + path.string());
  t.columns = split_header(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    t.add_row(parse_row(line, path));
  }
  return t;
}

}  // namespace resonance
