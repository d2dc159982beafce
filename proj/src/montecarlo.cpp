#include "smoothrisk/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "smoothrisk/calibration.hpp"
#include "smoothrisk/error.hpp"
#include "smoothrisk/losses.hpp"

namespace smoothrisk {
namespace {

void check_samples(std::size_t m) {
  if (m < kMinMcSamples) throw InvalidArgument("Monte Carlo needs at least 1000 samples");
}

}  // namespace

McEstimate mean_and_std_error(const Eigen::VectorXd& values) {
  const auto m = values.size();
  if (m == 0) throw InvalidArgument("no samples");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) sum += values[i];
  const double mean = sum / static_cast<double>(m);
  if (m == 1) return {mean, 0.0};
  double ss = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d = values[i] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));
  return {mean, sd / std::sqrt(static_cast<double>(m))};
}

McRisks mc_risks(const KernelModel& model, const SyntheticSpec& spec, double gamma, std::size_t m,
                 std::uint64_t seed) {
  check_samples(m);
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  const Dataset draws = generate(spec.with_seed(seed), m);
  const Eigen::VectorXd f = predict_batch(model, draws.instances);
  const auto& eta = *draws.eta;
  Eigen::VectorXd binary(f.size());
  Eigen::VectorXd phi(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double e = eta[static_cast<std::size_t>(i)];
    binary[i] = f[i] > 0.0 ? 1.0 - e : e;
    double v = 0.0;
    if (e > 0.0) v += e * smoothed_hinge_value(f[i], gamma);
    if (e < 1.0) v += (1.0 - e) * smoothed_hinge_value(-f[i], gamma);
    phi[i] = v;
  }
  return {mean_and_std_error(binary), mean_and_std_error(phi)};
}

McEstimate mc_binary_risk(const KernelModel& model, const SyntheticSpec& spec, std::size_t m, std::uint64_t seed) {
  check_samples(m);
  const Dataset draws = generate(spec.with_seed(seed), m);
  const Eigen::VectorXd f = predict_batch(model, draws.instances);
  Eigen::VectorXd binary(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double e = (*draws.eta)[static_cast<std::size_t>(i)];
    binary[i] = f[i] > 0.0 ? 1.0 - e : e;
  }
  return mean_and_std_error(binary);
}

McEstimate mc_phi_risk(const KernelModel& model, const SyntheticSpec& spec, double gamma, std::size_t m,
                       std::uint64_t seed) {
  return mc_risks(model, spec, gamma, m, seed).phi;
}

McEstimate bayes_risk(const SyntheticSpec& spec, std::size_t m) {
  spec.validate();
  switch (spec.family) {
    case Family::margin_blobs: return {0.0, 0.0};
    case Family::noisy_halfspace: return {spec.flip_prob, 0.0};
    case Family::smooth_eta: {
      check_samples(m);
      const Dataset draws = generate(spec.with_seed(derive_seed(spec.seed, 0xba7e5, 0)), m);
      Eigen::VectorXd v(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) {
        const double e = (*draws.eta)[i];
        v[static_cast<Eigen::Index>(i)] = std::min(e, 1.0 - e);
      }
      return mean_and_std_error(v);
    }
  }
  return {0.0, 0.0};
}

double smoothed_hinge_conditional_minimum(double eta, double gamma) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("eta must lie in [0, 1]");
  if (eta == 0.0 || eta == 1.0) return 0.0;
  return smoothed_hinge_value(0.0, gamma) - psi_smoothed_hinge_closed(2.0 * eta - 1.0, gamma).value;
}

McEstimate bayes_phi_risk(const SyntheticSpec& spec, double gamma, std::size_t m) {
  spec.validate();
  switch (spec.family) {
    case Family::margin_blobs: return {0.0, 0.0};
    case Family::noisy_halfspace:
      return {smoothed_hinge_conditional_minimum(1.0 - spec.flip_prob, gamma), 0.0};
    case Family::smooth_eta: {
      check_samples(m);
      const Dataset draws = generate(spec.with_seed(derive_seed(spec.seed, 0xba7e5, 0)), m);
      Eigen::VectorXd v(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) {
        v[static_cast<Eigen::Index>(i)] = smoothed_hinge_conditional_minimum((*draws.eta)[i], gamma);
      }
      return mean_and_std_error(v);
    }
  }
  return {0.0, 0.0};
}

McEstimate estimate_r_phi_star(const SyntheticSpec& spec, const KernelSpec& kernel, double bound, double gamma,
                               const RPhiStarOptions& options) {
  const Dataset sample = generate(spec.with_seed(derive_seed(spec.seed, 0x5a4b1e, 0)), options.n);
  const auto ref = reference_solution(sample, kernel, bound, gamma, options.reference);
  return mc_phi_risk(ref.model, spec, gamma, options.m, derive_seed(spec.seed, 0x3c0ffee, 0));
}

}  // namespace smoothrisk
