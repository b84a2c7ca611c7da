#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bvarx::csv {

/// Round-trippable rendering (17 significant digits).
std::string exact(double v);
/// Human-readable rendering (6 significant digits).
std::string rounded(double v);

std::vector<std::string> split_line(std::string_view line);
std::string trim(std::string_view s);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read(const std::filesystem::path& path);

/// Writes `text` atomically enough for our purposes (truncate + write).
void write_text(const std::filesystem::path& path, const std::string& text);

/// Numeric table writer that emits both an exact file and a rounded mirror
/// (`name.csv` and `name.rounded.csv`). String cells are written verbatim.
class Writer {
 public:
  explicit Writer(std::vector<std::string> header, std::vector<std::string> preamble = {});
  Writer& cell(const std::string& text);
  Writer& cell(double value);
  Writer& cell(long long value);
  Writer& cell(int value) { return cell(static_cast<long long>(value)); }
  Writer& cell(std::size_t value) { return cell(static_cast<long long>(value)); }
  void end_row();

  std::string exact_text() const { return exact_; }
  std::string rounded_text() const { return rounded_; }
  /// Writes `path` and the rounded mirror next to it.
  void save(const std::filesystem::path& path) const;

 private:
  void sep();
  std::string exact_;
  std::string rounded_;
  bool row_open_ = false;
};

}  // namespace bvarx::csv
