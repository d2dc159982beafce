#include "smoothrisk/kernel.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "smoothrisk/error.hpp"

namespace smoothrisk {

std::string_view to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::rbf: return "rbf";
    case KernelKind::linear: return "linear";
    case KernelKind::polynomial: return "polynomial";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "rbf") return KernelKind::rbf;
  if (name == "linear") return KernelKind::linear;
  if (name == "polynomial") return KernelKind::polynomial;
  throw InvalidArgument("unknown kernel: " + std::string(name));
}

void KernelSpec::validate() const {
  if (kind == KernelKind::rbf && (!(bandwidth >= 0.0) || !std::isfinite(bandwidth))) {
    throw InvalidArgument("rbf bandwidth must be positive");
  }
  if (kind == KernelKind::polynomial && degree < 1) {
    throw InvalidArgument("polynomial degree must be >= 1");
  }
  if (kind == KernelKind::polynomial && !std::isfinite(offset)) {
    throw InvalidArgument("polynomial offset must be finite");
  }
}

double median_pairwise_distance(const Points& points, std::size_t max_points) {
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(points.rows()), max_points);
  std::vector<double> dists;
  dists.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dists.push_back((points.row(static_cast<Eigen::Index>(i)) -
                       points.row(static_cast<Eigen::Index>(j)))
                          .norm());
    }
  }
  if (dists.empty()) return 1.0;
  auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
  std::nth_element(dists.begin(), mid, dists.end());
  return *mid > 0.0 ? *mid : 1.0;
}

KernelSpec resolve_bandwidth(KernelSpec spec, const Points& points) {
  spec.validate();
  if (spec.needs_bandwidth()) spec.bandwidth = median_pairwise_distance(points);
  return spec;
}

}  // namespace smoothrisk
