#include "smoothrisk/rkhs_solver.hpp"

#include <cmath>
#include <sstream>

#include "smoothrisk/error.hpp"
#include "smoothrisk/losses.hpp"
#include "smoothrisk/parallel_kernels.hpp"

namespace smoothrisk {

void Dataset::validate() const {
  if (static_cast<Eigen::Index>(labels.size()) != instances.rows()) {
    throw InvalidArgument("labels and instances differ in length");
  }
  if (!instances.allFinite()) throw InvalidArgument("instances must be finite");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) throw InvalidArgument("labels must be -1 or +1");
  }
  if (eta) {
    if (eta->size() != size()) throw InvalidArgument("eta and instances differ in length");
    for (double e : *eta) {
      if (!(e >= 0.0 && e <= 1.0)) throw InvalidArgument("eta values must lie in [0, 1]");
    }
  }
}

namespace {

void check_risk_args(const Dataset& data, double gamma) {
  if (data.size() == 0) throw InvalidArgument("dataset must be nonempty");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
}

void check_resolved(const KernelSpec& kernel) {
  kernel.validate();
  if (kernel.kind == KernelKind::rbf && !(kernel.bandwidth > 0.0)) {
    throw InvalidArgument("rbf bandwidth must be resolved before building a Gram matrix");
  }
}

}  // namespace

Eigen::MatrixXd gram_matrix(const Points& points, const KernelSpec& kernel) {
  if (points.rows() < 1) throw InvalidArgument("gram_matrix needs at least one point");
  if (!points.allFinite()) throw InvalidArgument("points must be finite");
  check_resolved(kernel);
  return parallel::gram_matrix(points, kernel);
}

double predict(const KernelModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != model.points.cols()) throw InvalidArgument("instance dimension mismatch");
  if (model.coeffs.size() != model.points.rows()) throw InvalidArgument("coeffs and points differ in length");
  const Eigen::VectorXd xc = x;
  double s = 0.0;
  for (Eigen::Index i = 0; i < model.points.rows(); ++i) {
    s += model.coeffs[i] *
         model.kernel(model.points.row(i).data(), xc.data(), static_cast<std::size_t>(xc.size()));
  }
  return s;
}

Eigen::VectorXd predict_batch(const KernelModel& model, const Points& queries) {
  if (queries.cols() != model.points.cols()) throw InvalidArgument("instance dimension mismatch");
  if (model.coeffs.size() != model.points.rows()) throw InvalidArgument("coeffs and points differ in length");
  return parallel::predict_batch(model.points, model.coeffs, model.kernel, queries);
}

double hilbert_norm(const Eigen::VectorXd& coeffs, const Eigen::MatrixXd& gram) {
  const double q = coeffs.dot(parallel::gram_apply(gram, coeffs));
  return std::sqrt(std::max(0.0, q));
}

double empirical_phi_risk(const KernelModel& model, const Dataset& data, double gamma) {
  check_risk_args(data, gamma);
  const Eigen::VectorXd f = predict_batch(model, data.instances);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) sum += smoothed_hinge_value(data.labels[i] * f[i], gamma);
  return sum / static_cast<double>(f.size());
}

Eigen::VectorXd risk_gradient_coeffs(const KernelModel& model, const Dataset& data, double gamma) {
  check_risk_args(data, gamma);
  if (model.points.rows() != data.instances.rows()) {
    throw InvalidArgument("gradient coefficients live on the training points");
  }
  const Eigen::VectorXd f = predict_batch(model, data.instances);
  const double inv_n = 1.0 / static_cast<double>(f.size());
  Eigen::VectorXd g(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    g[i] = inv_n * smoothed_hinge_deriv(data.labels[i] * f[i], gamma) * data.labels[i];
  }
  return g;
}

Eigen::VectorXd project_to_ball(const Eigen::VectorXd& coeffs, const Eigen::MatrixXd& gram, double bound) {
  if (!(bound > 0.0)) throw InvalidArgument("ball radius must be positive");
  const double norm = hilbert_norm(coeffs, gram);
  if (norm <= bound) return coeffs;
  return coeffs * (bound / norm);
}

double power_iteration_lambda_max(const Eigen::MatrixXd& gram, int steps) {
  const Eigen::Index n = gram.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0.0;
  for (int it = 0; it < steps; ++it) {
    const Eigen::VectorXd w = parallel::gram_apply(gram, v);
    lambda = v.dot(w);
    const double norm = w.norm();
    if (!(norm > 0.0)) return 0.0;
    v = w / norm;
  }
  return std::max(lambda, v.dot(parallel::gram_apply(gram, v)));
}

EmpiricalRiskProblem::EmpiricalRiskProblem(Dataset data, KernelSpec kernel, double bound, double gamma)
    : data_(std::move(data)), kernel_(kernel), bound_(bound), gamma_(gamma) {
  data_.validate();
  check_risk_args(data_, gamma);
  if (!(bound > 0.0) || !std::isfinite(bound)) throw InvalidArgument("ball radius B must be positive");
  kernel_ = resolve_bandwidth(kernel_, data_.instances);
  gram_ = gram_matrix(data_.instances, kernel_);
  lambda_max_ = power_iteration_lambda_max(gram_);
  if (!(lambda_max_ > 0.0)) throw InvalidArgument("Gram matrix is zero; nothing to optimize");
  lipschitz_ = gamma_ * lambda_max_ / (4.0 * static_cast<double>(data_.size()));
}

EmpiricalRiskProblem EmpiricalRiskProblem::with_gamma(double gamma) const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
  EmpiricalRiskProblem copy = *this;
  copy.gamma_ = gamma;
  copy.lipschitz_ = gamma * lambda_max_ / (4.0 * static_cast<double>(data_.size()));
  return copy;
}

double EmpiricalRiskProblem::risk_from_predictions(const Eigen::VectorXd& predictions) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < predictions.size(); ++i) {
    sum += smoothed_hinge_value(data_.labels[i] * predictions[i], gamma_);
  }
  return sum / static_cast<double>(predictions.size());
}

Eigen::VectorXd EmpiricalRiskProblem::gradient_from_predictions(const Eigen::VectorXd& predictions) const {
  const double inv_n = 1.0 / static_cast<double>(predictions.size());
  Eigen::VectorXd g(predictions.size());
  for (Eigen::Index i = 0; i < predictions.size(); ++i) {
    const double y = data_.labels[i];
    g[i] = inv_n * smoothed_hinge_deriv(y * predictions[i], gamma_) * y;
  }
  return g;
}

double EmpiricalRiskProblem::risk(const Eigen::VectorXd& coeffs) const {
  return risk_from_predictions(parallel::gram_apply(gram_, coeffs));
}

double EmpiricalRiskProblem::frank_wolfe_gap(const Eigen::VectorXd& coeffs) const {
  const Eigen::VectorXd kf = parallel::gram_apply(gram_, coeffs);
  const Eigen::VectorXd g = gradient_from_predictions(kf);
  const double grad_norm2 = g.dot(parallel::gram_apply(gram_, g));
  return g.dot(kf) + bound_ * std::sqrt(std::max(0.0, grad_norm2));
}

KernelModel EmpiricalRiskProblem::model(Eigen::VectorXd coeffs) const {
  return KernelModel{data_.instances, std::move(coeffs), bound_, kernel_};
}

namespace {

// One accelerated step at a time. K f and K h are carried alongside the
// coefficients so each step costs a single Gram product.
class AgdIterator {
 public:
  explicit AgdIterator(const EmpiricalRiskProblem& problem)
      : problem_(problem),
        n_(static_cast<Eigen::Index>(problem.data().size())),
        f_(Eigen::VectorXd::Zero(n_)),
        h_(Eigen::VectorXd::Zero(n_)),
        kf_(Eigen::VectorXd::Zero(n_)),
        kh_(Eigen::VectorXd::Zero(n_)) {
    risk_ = problem_.risk_from_predictions(kf_);
  }

  void step() {
    const double theta = 2.0 / (static_cast<double>(s_) + 2.0);
    const Eigen::VectorXd kg = (1.0 - theta) * kf_ + theta * kh_;
    const Eigen::VectorXd grad = problem_.gradient_from_predictions(kg);
    h_ -= grad / (theta * problem_.lipschitz());
    kh_ = parallel::gram_apply(problem_.gram(), h_);
    const double norm2 = h_.dot(kh_);
    const double bound = problem_.bound();
    if (norm2 > bound * bound) {
      const double scale = bound / std::sqrt(norm2);
      h_ *= scale;
      kh_ *= scale;
    }
    f_ = (1.0 - theta) * f_ + theta * h_;
    kf_ = (1.0 - theta) * kf_ + theta * kh_;
    theta_ = theta;
    ++s_;
    risk_ = problem_.risk_from_predictions(kf_);
    if (!std::isfinite(risk_)) {
      std::ostringstream diag;
      diag << "s=" << s_ << " theta=" << theta << " L=" << problem_.lipschitz() << " risk=" << risk_;
      throw NumericFailure("accelerated gradient produced a non-finite risk", diag.str());
    }
  }

  std::size_t s() const noexcept { return s_; }
  double theta() const noexcept { return theta_; }
  double risk() const noexcept { return risk_; }
  const Eigen::VectorXd& f() const noexcept { return f_; }
  const Eigen::VectorXd& h() const noexcept { return h_; }

 private:
  const EmpiricalRiskProblem& problem_;
  Eigen::Index n_;
  Eigen::VectorXd f_, h_, kf_, kh_;
  std::size_t s_ = 0;
  double theta_ = 1.0;
  double risk_ = 0.0;
};

TraceEntry trace_entry(std::size_t s, double risk, const EmpiricalRiskProblem& problem) {
  const double d = static_cast<double>(s) + 2.0;
  return {s, risk, problem.gamma() * problem.bound() * problem.bound() / (d * d)};
}

}  // namespace

TrainResult train_agd(const EmpiricalRiskProblem& problem, std::size_t k) {
  if (k < 1) throw InvalidArgument("iteration count k must be >= 1");
  AgdIterator it(problem);
  SolverState state;
  state.lipschitz = problem.lipschitz();
  state.trace.reserve(k + 1);
  state.trace.push_back(trace_entry(0, it.risk(), problem));
  try {
    while (it.s() < k) {
      it.step();
      state.trace.push_back(trace_entry(it.s(), it.risk(), problem));
    }
  } catch (const NumericFailure& e) {
    std::ostringstream diag;
    diag << e.diagnostics() << "; trace:";
    for (const auto& t : state.trace) diag << " (" << t.s << "," << t.empirical_risk << ")";
    throw NumericFailure(e.what(), diag.str());
  }
  state.iteration = it.s();
  state.theta = it.theta();
  state.f_coeffs = it.f();
  state.h_coeffs = it.h();
  return {problem.model(it.f()), std::move(state)};
}

TrainResult train_agd(const Dataset& data, const KernelSpec& kernel, double bound, double gamma, std::size_t k) {
  if (k < 1) throw InvalidArgument("iteration count k must be >= 1");
  return train_agd(EmpiricalRiskProblem(data, kernel, bound, gamma), k);
}

ReferenceResult reference_solution(const EmpiricalRiskProblem& problem, const ReferenceOptions& options) {
  AgdIterator it(problem);
  Eigen::VectorXd best = it.f();
  double best_risk = it.risk();
  double last_checked_risk = best_risk;
  double gap = problem.frank_wolfe_gap(best);
  std::size_t stalls = 0;
  const std::size_t every = std::max<std::size_t>(1, options.check_every);
  while (it.s() < options.max_iterations) {
    it.step();
    if (it.risk() < best_risk) {
      best_risk = it.risk();
      best = it.f();
    }
    if (it.s() % every == 0) {
      gap = problem.frank_wolfe_gap(best);
      if (gap <= options.gap_tolerance) break;
      stalls = std::abs(last_checked_risk - best_risk) < options.risk_tolerance ? stalls + 1 : 0;
      last_checked_risk = best_risk;
      if (options.stall_checks > 0 && stalls >= options.stall_checks) break;
    }
  }
  gap = problem.frank_wolfe_gap(best);
  ReferenceResult out;
  out.risk = problem.risk(best);
  out.gap = gap;
  out.iterations = it.s();
  out.model = problem.model(std::move(best));
  return out;
}

ReferenceResult reference_solution(const Dataset& data, const KernelSpec& kernel, double bound, double gamma,
                                   const ReferenceOptions& options) {
  return reference_solution(EmpiricalRiskProblem(data, kernel, bound, gamma), options);
}

}  // namespace smoothrisk
