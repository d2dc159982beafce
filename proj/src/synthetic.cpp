#include "smoothrisk/synthetic.hpp"

#include <cmath>
#include <random>
#include <string>

#include "smoothrisk/error.hpp"
#include "smoothrisk/losses.hpp"

namespace smoothrisk {

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::margin_blobs: return "margin_blobs";
    case Family::noisy_halfspace: return "noisy_halfspace";
    case Family::smooth_eta: return "smooth_eta";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "margin_blobs") return Family::margin_blobs;
  if (name == "noisy_halfspace") return Family::noisy_halfspace;
  if (name == "smooth_eta") return Family::smooth_eta;
  throw InvalidArgument("unknown synthetic family: " + std::string(name));
}

SyntheticSpec SyntheticSpec::margin_blobs(double epsilon, std::size_t dim, std::uint64_t seed) {
  SyntheticSpec s;
  s.family = Family::margin_blobs;
  s.epsilon = epsilon;
  s.dim = dim;
  s.seed = seed;
  s.validate();
  return s;
}

SyntheticSpec SyntheticSpec::noisy_halfspace(double flip_prob, std::size_t dim, std::uint64_t seed) {
  SyntheticSpec s;
  s.family = Family::noisy_halfspace;
  s.flip_prob = flip_prob;
  s.dim = dim;
  s.seed = seed;
  s.validate();
  return s;
}

SyntheticSpec SyntheticSpec::smooth_eta(std::size_t dim, double weight_scale, std::uint64_t seed) {
  SyntheticSpec s;
  s.family = Family::smooth_eta;
  s.dim = dim;
  s.weight_scale = weight_scale;
  s.seed = seed;
  s.validate();
  return s;
}

void SyntheticSpec::validate() const {
  if (dim == 0) throw InvalidArgument("dimension must be positive");
  switch (family) {
    case Family::margin_blobs:
      if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("margin epsilon must be positive");
      break;
    case Family::noisy_halfspace:
      if (!(flip_prob >= 0.0 && flip_prob < 0.5)) throw InvalidArgument("flip_prob must lie in [0, 1/2)");
      break;
    case Family::smooth_eta:
      if (!std::isfinite(weight_scale)) throw InvalidArgument("weight_scale must be finite");
      break;
  }
}

double SyntheticSpec::eta(const double* x) const noexcept {
  switch (family) {
    case Family::margin_blobs: return x[0] > 0.0 ? 1.0 : 0.0;
    case Family::noisy_halfspace: return x[0] >= 0.0 ? 1.0 - flip_prob : flip_prob;
    case Family::smooth_eta: return sigmoid(weight_scale * x[0]);
  }
  return 0.5;
}

Dataset generate(const SyntheticSpec& spec, std::size_t n) {
  spec.validate();
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(spec.dim);
  Dataset data;
  data.instances.resize(rows, cols);
  data.labels.resize(rows);
  std::vector<double> eta(n);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  for (Eigen::Index i = 0; i < rows; ++i) {
    double* x = data.instances.row(i).data();
    double y = 0.0;
    switch (spec.family) {
      case Family::margin_blobs: {
        y = uniform(rng) < 0.5 ? 1.0 : -1.0;
        x[0] = y * (spec.epsilon + std::abs(normal(rng)));
        for (Eigen::Index j = 1; j < cols; ++j) x[j] = normal(rng);
        break;
      }
      case Family::noisy_halfspace: {
        for (Eigen::Index j = 0; j < cols; ++j) x[j] = normal(rng);
        const double clean = x[0] >= 0.0 ? 1.0 : -1.0;
        y = uniform(rng) < spec.flip_prob ? -clean : clean;
        break;
      }
      case Family::smooth_eta: {
        for (Eigen::Index j = 0; j < cols; ++j) x[j] = normal(rng);
        y = uniform(rng) < spec.eta(x) ? 1.0 : -1.0;
        break;
      }
    }
    data.labels[i] = y;
    eta[static_cast<std::size_t>(i)] = spec.eta(x);
  }
  data.eta = std::move(eta);
  return data;
}

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return mix_seed(mix_seed(mix_seed(mix_seed(master) ^ a) ^ b) ^ c);
}

}  // namespace smoothrisk
