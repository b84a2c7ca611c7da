#include "bvarx/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bvarx/errors.hpp"

namespace bvarx::csv {
namespace {

std::string format(double v, int digits) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  if (v == 0.0) return "0";  // folds -0 too
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace

std::string exact(double v) { return format(v, 17); }
std::string rounded(double v) { return format(v, 6); }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw DataError(DataFault::MissingFile, "data_panel", "cannot open " + path.string());
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto cells = split_line(trimmed);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header)
    throw DataError(DataFault::BadShape, "data_panel", path.string() + " has no header row");
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("io", "cannot write " + path.string());
  out << text;
}

Writer::Writer(std::vector<std::string> header, std::vector<std::string> preamble) {
  for (const auto& line : preamble) {
    exact_ += "# " + line + "\n";
    rounded_ += "# " + line + "\n";
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) {
      exact_ += ',';
      rounded_ += ',';
    }
    exact_ += header[i];
    rounded_ += header[i];
  }
  exact_ += '\n';
  rounded_ += '\n';
}

void Writer::sep() {
  if (row_open_) {
    exact_ += ',';
    rounded_ += ',';
  }
  row_open_ = true;
}

Writer& Writer::cell(const std::string& text) {
  sep();
  exact_ += text;
  rounded_ += text;
  return *this;
}

Writer& Writer::cell(double value) {
  sep();
  exact_ += exact(value);
  rounded_ += rounded(value);
  return *this;
}

Writer& Writer::cell(long long value) {
  sep();
  const auto s = std::to_string(value);
  exact_ += s;
  rounded_ += s;
  return *this;
}

void Writer::end_row() {
  exact_ += '\n';
  rounded_ += '\n';
  row_open_ = false;
}

void Writer::save(const std::filesystem::path& path) const {
  write_text(path, exact_);
  auto mirror = path;
  mirror.replace_extension(".rounded" + path.extension().string());
  write_text(mirror, rounded_);
}

}  // namespace bvarx::csv
