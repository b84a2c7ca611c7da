#pragma once

#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bvarx {

/// Calendar month. Ordered and convertible to a running month count.
struct YearMonth {
  int year = 1970;
  int month = 1;  // 1..12

  int serial() const { return year * 12 + (month - 1); }
  static YearMonth from_serial(int serial);
  /// Parses "YYYY-MM" (a trailing "-DD" is accepted and ignored).
  static std::optional<YearMonth> parse(std::string_view text);
  std::string to_string() const;
  YearMonth plus_months(int n) const { return from_serial(serial() + n); }

  auto operator<=>(const YearMonth&) const = default;
};

enum class Role { Endogenous, Exogenous };

/// Which columns to read and in which block they land. Column order in the
/// resulting panel follows the order of these lists.
struct Schema {
  std::vector<std::string> endogenous;
  std::vector<std::string> exogenous;
};

/// Monthly multivariate panel with an endogenous block (T x m) and an
/// exogenous block (T x k). Immutable once built: every operation returns a
/// new panel.
class Panel {
 public:
  Panel() = default;
  /// Validates shapes, monthly spacing, unique names and finiteness.
  Panel(std::vector<YearMonth> dates, Eigen::MatrixXd endog, Eigen::MatrixXd exog,
        std::vector<std::string> endog_names, std::vector<std::string> exog_names,
        std::vector<std::string> provenance = {});

  Eigen::Index rows() const { return endog_.rows(); }
  Eigen::Index num_endog() const { return endog_.cols(); }
  Eigen::Index num_exog() const { return exog_.cols(); }

  const std::vector<YearMonth>& dates() const { return dates_; }
  const Eigen::MatrixXd& endog() const { return endog_; }
  const Eigen::MatrixXd& exog() const { return exog_; }
  const std::vector<std::string>& endog_names() const { return endog_names_; }
  const std::vector<std::string>& exog_names() const { return exog_names_; }
  /// Transform log, e.g. "log(EPU)".
  const std::vector<std::string>& provenance() const { return provenance_; }

  /// Locates a column by name in either block.
  std::optional<std::pair<Role, Eigen::Index>> find(const std::string& name) const;
  Eigen::VectorXd column(const std::string& name) const;

  /// Rows [begin, end) as a new panel.
  Panel slice(Eigen::Index begin, Eigen::Index end) const;

  Panel with_column(const std::string& name, const Eigen::VectorXd& values,
                    const std::string& note) const;

 private:
  std::vector<YearMonth> dates_;
  Eigen::MatrixXd endog_;
  Eigen::MatrixXd exog_;
  std::vector<std::string> endog_names_;
  std::vector<std::string> exog_names_;
  std::vector<std::string> provenance_;
};

/// Reads one or more wide CSV files (first column a YYYY-MM date) and aligns
/// them on the intersection of their dates.
Panel load_panel(const std::vector<std::filesystem::path>& paths, const Schema& schema);

enum class TransformOp { None, Log, Log10, Standardize };
TransformOp parse_transform(const std::string& name);

Panel transform(const Panel& panel, const std::string& column, TransformOp op);

struct SplitSpec {
  Eigen::Index train_end = 0;  // number of training rows
  Eigen::Index horizon = 0;
  Eigen::Index max_lag = 0;    // largest lag order that will be fitted on train
};

struct TrainTest {
  Panel train;
  Panel test;
};

TrainTest split(const Panel& panel, const SplitSpec& spec);

/// Pinned H-step exogenous path: the last H exogenous rows of `train`.
struct ExogPath {
  Eigen::MatrixXd values;  // H x k
  Eigen::Index horizon() const { return values.rows(); }
};

ExogPath future_exog(const Panel& train, Eigen::Index horizon);

/// Canonical CSV: date column, endogenous columns, exogenous columns,
/// values printed with 17 significant digits.
void write_panel_csv(const Panel& panel, const std::filesystem::path& path);
std::string panel_to_csv(const Panel& panel);

}  // namespace bvarx
