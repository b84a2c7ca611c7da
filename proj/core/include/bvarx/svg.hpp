#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvarx/wavelet.hpp"

namespace bvarx::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f4e79";
  bool dashed = false;
};

struct Band {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
  std::string color = "#9ecae1";
};

struct Frame {
  double width = 640;
  double height = 360;
  std::string title;
  std::string xlabel;
  std::string ylabel;
};

/// Self-contained line chart with optional shaded bands (non-finite points skipped).
std::string line_chart(const Frame& frame, const std::vector<Series>& series, const std::vector<Band>& bands = {});

/// Scale x time heatmap of values in [0, 1]. Optional arrows from `phase`
/// (every `arrow_step` cells) and hatching of `shade` cells.
std::string heatmap(const Frame& frame, const Eigen::MatrixXd& values, const std::vector<double>& periods,
                    const Eigen::MatrixXd* phase = nullptr, const BoolField* outline = nullptr,
                    const BoolField* shade = nullptr, int arrow_step = 8);

/// Lays pre-rendered SVG documents out in a grid of `cols` columns.
std::string grid(const std::vector<std::string>& panels, int cols, double cell_width, double cell_height,
                 const std::string& title = {});

std::string escape(const std::string& text);

}  // namespace bvarx::svg
