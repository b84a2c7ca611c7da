#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace bvarx {

using Rng = std::mt19937_64;

/// Independent generator for sub-stream `stream` of a run seeded with `seed`.
/// Streams are keyed by index, never by thread, so results do not depend on
/// how work is split across workers.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

inline Eigen::MatrixXd standard_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::MatrixXd out(rows, cols);
  // Fill in row-major order so layouts are easy to reason about in tests.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = n01(rng);
  return out;
}

}  // namespace bvarx
