#include "bvarx/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "bvarx/csv.hpp"
#include "bvarx/errors.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "data_panel";

[[noreturn]] void fail(DataFault fault, const std::string& msg) {
  throw DataError(fault, kModule, msg);
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

void check_names_unique(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::set<std::string> seen;
  for (const auto* names : {&a, &b})
    for (const auto& n : *names)
      if (!seen.insert(n).second) fail(DataFault::DuplicateColumn, "duplicate column name '" + n + "'");
}

}  // namespace

YearMonth YearMonth::from_serial(int serial) {
  YearMonth ym;
  ym.year = serial >= 0 ? serial / 12 : -((-serial + 11) / 12);
  ym.month = serial - ym.year * 12 + 1;
  return ym;
}

std::optional<YearMonth> YearMonth::parse(std::string_view text) {
  // YYYY-MM or YYYY-MM-DD
  if (text.size() != 7 && text.size() != 10) return std::nullopt;
  auto digits = [&](std::size_t pos, std::size_t n, int& out) {
    out = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
      if (text[i] < '0' || text[i] > '9') return false;
      out = out * 10 + (text[i] - '0');
    }
    return true;
  };
  YearMonth ym;
  if (!digits(0, 4, ym.year) || text[4] != '-' || !digits(5, 2, ym.month)) return std::nullopt;
  if (ym.month < 1 || ym.month > 12) return std::nullopt;
  if (text.size() == 10) {
    int day = 0;
    if (text[7] != '-' || !digits(8, 2, day) || day < 1 || day > 31) return std::nullopt;
  }
  return ym;
}

std::string YearMonth::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

Panel::Panel(std::vector<YearMonth> dates, Eigen::MatrixXd endog, Eigen::MatrixXd exog,
             std::vector<std::string> endog_names, std::vector<std::string> exog_names,
             std::vector<std::string> provenance)
    : dates_(std::move(dates)),
      endog_(std::move(endog)),
      exog_(std::move(exog)),
      endog_names_(std::move(endog_names)),
      exog_names_(std::move(exog_names)),
      provenance_(std::move(provenance)) {
  const auto t = static_cast<Eigen::Index>(dates_.size());
  if (exog_.rows() == 0 && exog_.cols() == 0) exog_.resize(t, 0);
  if (endog_.rows() != t || exog_.rows() != t)
    fail(DataFault::BadShape, "panel blocks do not match the number of dates");
  if (endog_.cols() < 1) fail(DataFault::BadShape, "panel needs at least one endogenous column");
  if (static_cast<Eigen::Index>(endog_names_.size()) != endog_.cols() ||
      static_cast<Eigen::Index>(exog_names_.size()) != exog_.cols())
    fail(DataFault::BadShape, "column names do not match block widths");
  check_names_unique(endog_names_, exog_names_);
  for (std::size_t i = 1; i < dates_.size(); ++i) {
    const int step = dates_[i].serial() - dates_[i - 1].serial();
    if (step == 0) fail(DataFault::DuplicateDate, "duplicated date " + dates_[i].to_string());
    if (step < 0) fail(DataFault::BadDate, "dates not increasing at " + dates_[i].to_string());
    if (step > 1)
      fail(DataFault::MonthlyGap,
           "gap in monthly index: " + dates_[i - 1].plus_months(1).to_string() + " missing");
  }
  if (!endog_.allFinite() || !exog_.allFinite())
    fail(DataFault::MissingValue, "panel contains non-finite values");
}

std::optional<std::pair<Role, Eigen::Index>> Panel::find(const std::string& name) const {
  for (std::size_t i = 0; i < endog_names_.size(); ++i)
    if (endog_names_[i] == name) return std::pair{Role::Endogenous, static_cast<Eigen::Index>(i)};
  for (std::size_t i = 0; i < exog_names_.size(); ++i)
    if (exog_names_[i] == name) return std::pair{Role::Exogenous, static_cast<Eigen::Index>(i)};
  return std::nullopt;
}

Eigen::VectorXd Panel::column(const std::string& name) const {
  auto where = find(name);
  if (!where) fail(DataFault::MissingColumn, "no column named '" + name + "'");
  return where->first == Role::Endogenous ? Eigen::VectorXd(endog_.col(where->second))
                                          : Eigen::VectorXd(exog_.col(where->second));
}

Panel Panel::slice(Eigen::Index begin, Eigen::Index end) const {
  if (begin < 0 || end > rows() || begin > end) fail(DataFault::BadShape, "row slice out of range");
  std::vector<YearMonth> d(dates_.begin() + begin, dates_.begin() + end);
  return Panel(std::move(d), endog_.middleRows(begin, end - begin),
               exog_.middleRows(begin, end - begin), endog_names_, exog_names_, provenance_);
}

Panel Panel::with_column(const std::string& name, const Eigen::VectorXd& values,
                         const std::string& note) const {
  auto where = find(name);
  if (!where) fail(DataFault::MissingColumn, "no column named '" + name + "'");
  Eigen::MatrixXd en = endog_, ex = exog_;
  (where->first == Role::Endogenous ? en : ex).col(where->second) = values;
  auto prov = provenance_;
  if (!note.empty()) prov.push_back(note);
  return Panel(dates_, std::move(en), std::move(ex), endog_names_, exog_names_, std::move(prov));
}

Panel load_panel(const std::vector<std::filesystem::path>& paths, const Schema& schema) {
  if (paths.empty()) fail(DataFault::MissingFile, "no input files given");
  check_names_unique(schema.endogenous, schema.exogenous);

  struct Source {
    std::map<int, std::size_t> row_of_serial;  // date serial -> row
    csv::Table table;
  };
  std::vector<Source> sources;
  std::map<std::string, std::pair<std::size_t, std::size_t>> where;  // column -> (file, col)

  for (const auto& path : paths) {
    Source src;
    src.table = csv::read(path);
    if (src.table.header.size() < 2)
      fail(DataFault::BadShape, path.string() + ": need a date column and at least one value column");
    for (std::size_t r = 0; r < src.table.rows.size(); ++r) {
      const auto& row = src.table.rows[r];
      if (row.size() != src.table.header.size())
        fail(DataFault::BadShape, path.string() + ": row " + std::to_string(r + 2) +
                                      " has " + std::to_string(row.size()) + " cells");
      auto ym = YearMonth::parse(row[0]);
      if (!ym) fail(DataFault::BadDate, path.string() + ": unparseable date '" + row[0] + "'");
      if (!src.row_of_serial.emplace(ym->serial(), r).second)
        fail(DataFault::DuplicateDate, path.string() + ": duplicated date " + ym->to_string());
    }
    const std::size_t file_index = sources.size();
    for (std::size_t c = 1; c < src.table.header.size(); ++c) {
      const auto& name = src.table.header[c];
      if (!where.emplace(name, std::pair{file_index, c}).second) {
        const bool used =
            std::find(schema.endogenous.begin(), schema.endogenous.end(), name) != schema.endogenous.end() ||
            std::find(schema.exogenous.begin(), schema.exogenous.end(), name) != schema.exogenous.end();
        if (used) fail(DataFault::DuplicateColumn, "column '" + name + "' appears in more than one file");
      }
    }
    sources.push_back(std::move(src));
  }

  std::vector<std::string> wanted = schema.endogenous;
  wanted.insert(wanted.end(), schema.exogenous.begin(), schema.exogenous.end());
  std::set<std::size_t> used_files;
  for (const auto& name : wanted) {
    auto it = where.find(name);
    if (it == where.end()) fail(DataFault::MissingColumn, "missing column '" + name + "'");
    used_files.insert(it->second.first);
  }

  // Intersection of dates over contributing files.
  std::vector<int> serials;
  bool first = true;
  for (std::size_t f : used_files) {
    std::vector<int> mine;
    for (const auto& [s, r] : sources[f].row_of_serial) mine.push_back(s);
    if (first) {
      serials = std::move(mine);
      first = false;
    } else {
      std::vector<int> both;
      std::set_intersection(serials.begin(), serials.end(), mine.begin(), mine.end(),
                            std::back_inserter(both));
      serials = std::move(both);
    }
  }
  if (serials.empty()) fail(DataFault::BadShape, "input files share no dates");
  for (std::size_t i = 1; i < serials.size(); ++i)
    if (serials[i] - serials[i - 1] != 1)
      fail(DataFault::MonthlyGap, "gap in monthly index: " +
                                      YearMonth::from_serial(serials[i - 1] + 1).to_string() + " missing");

  const auto t = static_cast<Eigen::Index>(serials.size());
  auto fill = [&](const std::vector<std::string>& names) {
    Eigen::MatrixXd block(t, static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) {
      const auto [f, c] = where.at(names[j]);
      for (Eigen::Index i = 0; i < t; ++i) {
        const std::size_t r = sources[f].row_of_serial.at(serials[static_cast<std::size_t>(i)]);
        const auto& cell = sources[f].table.rows[r][c];
        auto v = parse_number(cell);
        if (!v)
          fail(DataFault::MissingValue, "missing or non-numeric value '" + cell + "' in column '" +
                                            names[j] + "' at " +
                                            YearMonth::from_serial(serials[static_cast<std::size_t>(i)]).to_string());
        block(i, static_cast<Eigen::Index>(j)) = *v;
      }
    }
    return block;
  };

  std::vector<YearMonth> dates;
  dates.reserve(serials.size());
  for (int s : serials) dates.push_back(YearMonth::from_serial(s));
  return Panel(std::move(dates), fill(schema.endogenous), fill(schema.exogenous),
               schema.endogenous, schema.exogenous);
}

TransformOp parse_transform(const std::string& name) {
  if (name == "none") return TransformOp::None;
  if (name == "log") return TransformOp::Log;
  if (name == "log10") return TransformOp::Log10;
  if (name == "standardize") return TransformOp::Standardize;
  throw ConfigError(kModule, "unknown transform '" + name + "'");
}

Panel transform(const Panel& panel, const std::string& column, TransformOp op) {
  if (op == TransformOp::None) return panel;
  Eigen::VectorXd v = panel.column(column);
  std::string note;
  switch (op) {
    case TransformOp::Log:
    case TransformOp::Log10:
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v(i) > 0.0))
          fail(DataFault::NonPositiveLog, "log transform of non-positive value in '" + column +
                                              "' at " + panel.dates()[static_cast<std::size_t>(i)].to_string());
        v(i) = op == TransformOp::Log ? std::log(v(i)) : std::log10(v(i));
      }
      note = (op == TransformOp::Log ? "log(" : "log10(") + column + ")";
      break;
    case TransformOp::Standardize: {
      if (v.size() < 2) fail(DataFault::BadShape, "standardize needs at least two rows");
      const double mean = v.mean();
      const double sd = std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
      if (!(sd > 0.0)) fail(DataFault::DegenerateScale, "cannot standardize constant column '" + column + "'");
      v = (v.array() - mean) / sd;
      note = "standardize(" + column + ")";
      break;
    }
    case TransformOp::None:
      break;
  }
  return panel.with_column(column, v, note);
}

TrainTest split(const Panel& panel, const SplitSpec& spec) {
  if (spec.horizon <= 0) fail(DataFault::BadShape, "split horizon must be positive");
  if (spec.train_end <= spec.max_lag)
    fail(DataFault::BadShape, "training window must be longer than the lag order");
  if (spec.train_end + spec.horizon > panel.rows())
    fail(DataFault::BadShape, "horizon overruns available data (train_end " +
                                  std::to_string(spec.train_end) + " + H " +
                                  std::to_string(spec.horizon) + " > T " +
                                  std::to_string(panel.rows()) + ")");
  return {panel.slice(0, spec.train_end),
          panel.slice(spec.train_end, spec.train_end + spec.horizon)};
}

ExogPath future_exog(const Panel& train, Eigen::Index horizon) {
  if (horizon <= 0) fail(DataFault::BadShape, "exogenous path horizon must be positive");
  if (train.num_exog() == 0) fail(DataFault::BadShape, "panel has no exogenous columns");
  if (horizon > train.rows())
    fail(DataFault::BadShape, "exogenous path horizon exceeds training length");
  return ExogPath{train.exog().bottomRows(horizon)};
}

std::string panel_to_csv(const Panel& panel) {
  std::ostringstream out;
  out << "date";
  for (const auto& n : panel.endog_names()) out << ',' << n;
  for (const auto& n : panel.exog_names()) out << ',' << n;
  out << '\n';
  for (Eigen::Index i = 0; i < panel.rows(); ++i) {
    out << panel.dates()[static_cast<std::size_t>(i)].to_string();
    for (Eigen::Index j = 0; j < panel.num_endog(); ++j) out << ',' << csv::exact(panel.endog()(i, j));
    for (Eigen::Index j = 0; j < panel.num_exog(); ++j) out << ',' << csv::exact(panel.exog()(i, j));
    out << '\n';
  }
  return out.str();
}

void write_panel_csv(const Panel& panel, const std::filesystem::path& path) {
  csv::write_text(path, panel_to_csv(panel));
}

}  // namespace bvarx
