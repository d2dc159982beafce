#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "smoothrisk/kernel.hpp"

namespace smoothrisk {

/// Labeled sample; `eta` holds P(y = +1 | x) at each instance when known.
struct Dataset {
  Points instances;
  Eigen::VectorXd labels;
  std::optional<std::vector<double>> eta;

  std::size_t size() const noexcept { return static_cast<std::size_t>(instances.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(instances.cols()); }

  /// Throws InvalidArgument on length mismatch, labels outside {-1, +1},
  /// eta outside [0, 1] or non-finite coordinates.
  void validate() const;
};

}  // namespace smoothrisk
