#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "smoothrisk/dataset.hpp"
#include "smoothrisk/kernel.hpp"

namespace smoothrisk {

/// f = sum_i coeffs[i] kernel(points_i, .) constrained to |f|_H <= norm_bound.
struct KernelModel {
  Points points;
  Eigen::VectorXd coeffs;
  double norm_bound = 1.0;
  KernelSpec kernel;
};

/// Throws InvalidArgument on non-finite input or an unresolved rbf bandwidth.
Eigen::MatrixXd gram_matrix(const Points& points, const KernelSpec& kernel);

/// Throws InvalidArgument on dimension mismatch.
double predict(const KernelModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::VectorXd predict_batch(const KernelModel& model, const Points& queries);

/// sqrt(max(0, c^T K c)).
double hilbert_norm(const Eigen::VectorXd& coeffs, const Eigen::MatrixXd& gram);

/// Mean smoothed hinge loss of y_i f(x_i).
double empirical_phi_risk(const KernelModel& model, const Dataset& data, double gamma);

/// Coefficients g on the model's points of the RKHS gradient of the empirical
/// risk: g[i] = phi'(y_i f(x_i)) y_i / n. The model points must be the
/// dataset instances.
Eigen::VectorXd risk_gradient_coeffs(const KernelModel& model, const Dataset& data, double gamma);

/// Scales coeffs onto the ball {c^T K c <= B^2} when outside it.
Eigen::VectorXd project_to_ball(const Eigen::VectorXd& coeffs, const Eigen::MatrixXd& gram, double bound);

/// Largest eigenvalue of a PSD matrix by power iteration from the ones vector.
double power_iteration_lambda_max(const Eigen::MatrixXd& gram, int steps = 100);

struct TraceEntry {
  std::size_t s = 0;
  double empirical_risk = 0.0;
  /// gamma B^2 / (s + 2)^2
  double suboptimality_bound = 0.0;
};

struct SolverState {
  std::size_t iteration = 0;
  Eigen::VectorXd f_coeffs;
  Eigen::VectorXd h_coeffs;
  double theta = 1.0;
  double lipschitz = 0.0;
  std::vector<TraceEntry> trace;
};

// Empirical smoothed-hinge risk over the RKHS ball, in coefficient space on
// the training points. Owns the Gram matrix and the smoothness constant
// L = gamma lambda_max(K) / (4 n).
class EmpiricalRiskProblem {
 public:
  EmpiricalRiskProblem(Dataset data, KernelSpec kernel, double bound, double gamma);

  const Dataset& data() const noexcept { return data_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  double bound() const noexcept { return bound_; }
  double gamma() const noexcept { return gamma_; }
  double lambda_max() const noexcept { return lambda_max_; }
  double lipschitz() const noexcept { return lipschitz_; }

  /// Mean loss given the predictions K c at the training points.
  double risk_from_predictions(const Eigen::VectorXd& predictions) const;
  Eigen::VectorXd gradient_from_predictions(const Eigen::VectorXd& predictions) const;
  double risk(const Eigen::VectorXd& coeffs) const;

  /// Frank-Wolfe gap <grad, f> + B |grad|, an upper bound on the suboptimality.
  double frank_wolfe_gap(const Eigen::VectorXd& coeffs) const;

  KernelModel model(Eigen::VectorXd coeffs) const;

  /// Same problem with a different smoothing parameter; reuses the Gram matrix.
  EmpiricalRiskProblem with_gamma(double gamma) const;

 private:
  Dataset data_;
  KernelSpec kernel_;
  Eigen::MatrixXd gram_;
  double bound_;
  double gamma_;
  double lambda_max_ = 0.0;
  double lipschitz_ = 0.0;
};

struct TrainResult {
  KernelModel model;
  SolverState state;
};

/// Accelerated projected gradient, k iterations from f0 = h0 = 0 with
/// theta_s = 2 / (s + 2):
///   g_s     = (1 - theta_s) f_s + theta_s h_s
///   h_{s+1} = Proj_B(h_s - grad(g_s) / (theta_s L))
///   f_{s+1} = (1 - theta_s) f_s + theta_s h_{s+1}
/// The trace has k + 1 entries (s = 0..k). Throws NumericFailure if the risk
/// becomes non-finite.
TrainResult train_agd(const EmpiricalRiskProblem& problem, std::size_t k);
TrainResult train_agd(const Dataset& data, const KernelSpec& kernel, double bound, double gamma,
                      std::size_t k);

struct ReferenceOptions {
  std::size_t max_iterations = 100000;
  /// Stop once the certified gap at f_s drops below this.
  double gap_tolerance = 1e-12;
  /// Also stop after `stall_checks` consecutive gap checks with successive
  /// risk change below `risk_tolerance`.
  double risk_tolerance = 1e-12;
  std::size_t stall_checks = 5;
  std::size_t check_every = 100;
};

struct ReferenceResult {
  KernelModel model;
  double risk = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
};

/// High-precision minimizer estimate: the same scheme run long, stopping on
/// the Frank-Wolfe certificate or the iteration cap.
ReferenceResult reference_solution(const EmpiricalRiskProblem& problem, const ReferenceOptions& options = {});
ReferenceResult reference_solution(const Dataset& data, const KernelSpec& kernel, double bound, double gamma,
                                   const ReferenceOptions& options = {});

}  // namespace smoothrisk
