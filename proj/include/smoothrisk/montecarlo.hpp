#pragma once

#include <cstddef>
#include <cstdint>

#include "smoothrisk/rkhs_solver.hpp"
#include "smoothrisk/synthetic.hpp"

namespace smoothrisk {

struct McEstimate {
  double estimate = 0.0;
  /// sample standard deviation / sqrt(m)
  double std_error = 0.0;
};

struct McRisks {
  McEstimate binary;
  McEstimate phi;
};

inline constexpr std::size_t kMinMcSamples = 1000;

// Both estimators integrate the label out analytically given eta(x) on m
// fresh instances drawn with `seed`:
//   binary: eta 1[f <= 0] + (1 - eta) 1[f > 0]   (f = 0 is read as class -1)
//   phi:    eta phi(f) + (1 - eta) phi(-f)
// m must be >= kMinMcSamples.
McRisks mc_risks(const KernelModel& model, const SyntheticSpec& spec, double gamma, std::size_t m,
                 std::uint64_t seed);
McEstimate mc_binary_risk(const KernelModel& model, const SyntheticSpec& spec, std::size_t m, std::uint64_t seed);
McEstimate mc_phi_risk(const KernelModel& model, const SyntheticSpec& spec, double gamma, std::size_t m,
                       std::uint64_t seed);

/// Bayes 0-1 risk E[min(eta, 1 - eta)]: exact for margin_blobs (0) and
/// noisy_halfspace (flip_prob), Monte Carlo with `m` draws for smooth_eta.
McEstimate bayes_risk(const SyntheticSpec& spec, std::size_t m = 1000000);

/// H(eta) of the smoothed hinge loss via the closed-form psi
/// (H(eta) = phi(0) - psi(2 eta - 1)); exactly 0 at eta in {0, 1}.
double smoothed_hinge_conditional_minimum(double eta, double gamma);

/// Smoothed-hinge risk of the best measurable classifier, E[H(eta(x))].
/// Exact for margin_blobs and noisy_halfspace, Monte Carlo for smooth_eta.
McEstimate bayes_phi_risk(const SyntheticSpec& spec, double gamma, std::size_t m = 1000000);

struct RPhiStarOptions {
  std::size_t n = 5000;
  std::size_t m = 100000;
  ReferenceOptions reference;
};

/// Plug-in estimate of min over the ball of R_phi: reference solve on a fresh
/// sample of size n, then mc_phi_risk with m draws. Biased upward.
McEstimate estimate_r_phi_star(const SyntheticSpec& spec, const KernelSpec& kernel, double bound, double gamma,
                               const RPhiStarOptions& options = {});

/// Mean and standard error of `values` (summed in index order).
McEstimate mean_and_std_error(const Eigen::VectorXd& values);

}  // namespace smoothrisk
