#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace smoothrisk {

/// Instances stored one per row.
using Points = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class KernelKind { rbf, linear, polynomial };

std::string_view to_string(KernelKind kind) noexcept;
KernelKind parse_kernel_kind(std::string_view name);

// rbf:        exp(-|x - y|^2 / (2 h^2))
// linear:     <x, y>
// polynomial: (<x, y> + offset)^degree
struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  /// rbf bandwidth h; 0 means "resolve with the median heuristic".
  double bandwidth = 0.0;
  int degree = 2;
  double offset = 1.0;

  static KernelSpec rbf(double bandwidth = 0.0) { return {KernelKind::rbf, bandwidth, 2, 1.0}; }
  static KernelSpec linear() { return {KernelKind::linear, 0.0, 2, 1.0}; }
  static KernelSpec polynomial(int degree, double offset) {
    return {KernelKind::polynomial, 0.0, degree, offset};
  }

  bool needs_bandwidth() const noexcept { return kind == KernelKind::rbf && bandwidth == 0.0; }

  /// Throws InvalidArgument when rbf bandwidth < 0 or non-finite, or degree < 1.
  void validate() const;

  double operator()(const double* x, const double* y, std::size_t dim) const noexcept {
    switch (kind) {
      case KernelKind::rbf: {
        double d2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          const double t = x[i] - y[i];
          d2 += t * t;
        }
        return std::exp(-d2 / (2.0 * bandwidth * bandwidth));
      }
      case KernelKind::linear: {
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) s += x[i] * y[i];
        return s;
      }
      case KernelKind::polynomial: {
        double s = offset;
        for (std::size_t i = 0; i < dim; ++i) s += x[i] * y[i];
        return std::pow(s, degree);
      }
    }
    return 0.0;
  }
};

/// Median of pairwise Euclidean distances over the first `max_points` rows.
/// Falls back to 1 when all points coincide.
double median_pairwise_distance(const Points& points, std::size_t max_points = 2000);

/// Returns `spec` with a concrete bandwidth, applying the median heuristic to
/// `points` when the bandwidth is unset.
KernelSpec resolve_bandwidth(KernelSpec spec, const Points& points);

}  // namespace smoothrisk
