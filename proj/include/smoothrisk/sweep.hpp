#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smoothrisk/montecarlo.hpp"
#include "smoothrisk/rkhs_solver.hpp"
#include "smoothrisk/synthetic.hpp"

namespace smoothrisk {

struct SweepConfig {
  SyntheticSpec spec;
  KernelSpec kernel = KernelSpec::rbf();
  double bound = 3.0;
  std::vector<double> gammas{1.0};
  std::vector<std::size_t> ks{100};
  std::vector<std::size_t> ns{200};
  std::size_t repetitions = 1;
  std::size_t mc_samples = 100000;
  std::uint64_t master_seed = 0;
  /// Solve each training set to high precision for the optimization check.
  bool lemma1_reference = true;
  ReferenceOptions reference{20000, 1e-10, 1e-12, 5, 100};
  /// Also estimate the ball-constrained plug-in R_phi* (expensive).
  bool ball_r_phi_star = false;
  RPhiStarOptions ball;
  /// Draws for the Monte Carlo Bayes quantities of smooth_eta.
  std::size_t bayes_samples = 1000000;

  void validate() const;
};

// One (gamma, k, n, repetition) cell. Field order is the CSV column order.
struct RiskReport {
  double gamma = 0.0;
  std::size_t k = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double emp_phi_risk = 0.0;
  double mc_phi_risk = 0.0;
  double mc_binary_risk = 0.0;
  double bayes_risk = 0.0;
  /// mc_phi_risk - r_phi_star
  double excess_phi = 0.0;
  /// mc_binary_risk - bayes_risk
  double excess_binary = 0.0;
  /// binary_excess_bound(excess_phi, gamma); 0 when excess_phi <= 0
  double thm4_bound = 0.0;
  /// gamma B^2 / (k + 2)^2
  double lemma1_bound = 0.0;
  double mc_phi_stderr = 0.0;
  double mc_binary_stderr = 0.0;
  double bayes_stderr = 0.0;
  /// E[H(eta(x))], the smoothed-hinge risk of the best measurable classifier
  double r_phi_star = 0.0;
  double r_phi_star_stderr = 0.0;
  /// plug-in min over the ball (NaN when not computed)
  double r_phi_star_ball = 0.0;
  /// reference empirical risk and its Frank-Wolfe gap (NaN when not computed)
  double ref_emp_phi_risk = 0.0;
  double ref_gap = 0.0;
  std::string family;
  std::size_t cell = 0;
  std::size_t repetition = 0;
  double bandwidth = 0.0;
  std::string error;
};

inline constexpr int kSweepSchemaVersion = 1;

/// Runs every cell; cells may run concurrently and the result is sorted by
/// (cell, repetition). Failures are recorded in `error` and the sweep goes on.
std::vector<RiskReport> run_sweep(const SweepConfig& config);

/// Writes the schema comment line, an optional timestamp comment, the
/// header and one row per report.
void write_sweep_csv(std::ostream& out, const std::vector<RiskReport>& rows, bool timestamp = true);
std::vector<RiskReport> read_sweep_csv(std::istream& in);

std::vector<std::string> sweep_csv_columns();

}  // namespace smoothrisk
