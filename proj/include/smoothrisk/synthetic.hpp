#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "smoothrisk/dataset.hpp"

namespace smoothrisk {

enum class Family { margin_blobs, noisy_halfspace, smooth_eta };

std::string_view to_string(Family family) noexcept;
Family parse_family(std::string_view name);

// Synthetic distributions with known conditional probability eta(x); the
// planted direction is the first coordinate axis in every family.
//   margin_blobs:    y = +-1 equiprobable, x0 = y (epsilon + |N(0,1)|), other
//                    coordinates N(0,1); eta in {0, 1}, separable with margin epsilon.
//   noisy_halfspace: x ~ N(0, I), clean label sign(x0) (x0 = 0 -> +1), flipped
//                    with probability flip_prob.
//   smooth_eta:      x ~ N(0, I), eta(x) = sigmoid(weight_scale * x0).
struct SyntheticSpec {
  Family family = Family::margin_blobs;
  std::size_t dim = 2;
  double epsilon = 0.5;
  double flip_prob = 0.1;
  double weight_scale = 2.0;
  std::uint64_t seed = 0;

  static SyntheticSpec margin_blobs(double epsilon, std::size_t dim, std::uint64_t seed = 0);
  static SyntheticSpec noisy_halfspace(double flip_prob, std::size_t dim, std::uint64_t seed = 0);
  static SyntheticSpec smooth_eta(std::size_t dim, double weight_scale = 2.0, std::uint64_t seed = 0);

  /// Throws InvalidArgument on epsilon <= 0, flip_prob outside [0, 1/2) or dim == 0.
  void validate() const;

  /// P(y = +1 | x).
  double eta(const double* x) const noexcept;

  SyntheticSpec with_seed(std::uint64_t s) const {
    SyntheticSpec copy = *this;
    copy.seed = s;
    return copy;
  }
};

/// n i.i.d. draws; a pure function of (spec, n).
Dataset generate(const SyntheticSpec& spec, std::size_t n);

/// SplitMix64 finalizer, used to derive independent seeds from counters.
std::uint64_t mix_seed(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) noexcept;

}  // namespace smoothrisk
