#include "smoothrisk/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smoothrisk/error.hpp"
#include "smoothrisk/minimize.hpp"
#include "smoothrisk/parallel_kernels.hpp"

namespace smoothrisk {
namespace {

BracketOptions bracket_for(const MarginLoss& loss) {
  BracketOptions opts;
  opts.cap = 1e3 / loss.scale() + 10.0;
  opts.tolerance = 1e-10;
  return opts;
}

Minimum1D minimize_conditional(const ConditionalRiskProblem& problem, BracketOptions opts) {
  return minimize_convex_1d([&](double a) { return conditional_risk(problem, a); },
                            [&](double a) { return conditional_risk_deriv(problem, a); }, opts);
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("smoothing parameter gamma must be positive and finite");
  }
}

double clamp_eta(double eta, bool& clamped) {
  if (std::isnan(eta)) throw InvalidArgument("eta must not be NaN");
  clamped = std::abs(eta) > kEtaClamp;
  return std::clamp(eta, -kEtaClamp, kEtaClamp);
}

}  // namespace

ConditionalRiskProblem::ConditionalRiskProblem(const MarginLoss& loss, double eta)
    : loss_(&loss), eta_(eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("eta must lie in [0, 1]");
}

double conditional_risk(const ConditionalRiskProblem& problem, double alpha) {
  const double eta = problem.eta();
  const auto& loss = problem.loss();
  // skip a zero-weight term so a loss that overflows on one side stays finite
  double r = 0.0;
  if (eta > 0.0) r += eta * loss.value(alpha);
  if (eta < 1.0) r += (1.0 - eta) * loss.value(-alpha);
  return r;
}

double conditional_risk_deriv(const ConditionalRiskProblem& problem, double alpha) {
  const double eta = problem.eta();
  const auto& loss = problem.loss();
  double d = 0.0;
  if (eta > 0.0) d += eta * loss.deriv(alpha);
  if (eta < 1.0) d -= (1.0 - eta) * loss.deriv(-alpha);
  return d;
}

HResult compute_H(const ConditionalRiskProblem& problem) {
  const auto m = minimize_conditional(problem, bracket_for(problem.loss()));
  return {m.value, m.argmin, m.at_cap};
}

double compute_H_minus(const ConditionalRiskProblem& problem) {
  auto opts = bracket_for(problem.loss());
  if (problem.eta() > 0.5) {
    opts.domain_hi = 0.0;
  } else if (problem.eta() < 0.5) {
    opts.domain_lo = 0.0;
  }
  return minimize_conditional(problem, opts).value;
}

CalibrationCertificate is_calibrated(const MarginLoss& loss, double margin) {
  CalibrationCertificate cert;
  cert.margin = margin;
  cert.deriv_at_zero = loss.deriv(0.0);
  constexpr double h = 1e-6;
  const double v0 = loss.value(0.0);
  cert.fd_left = (v0 - loss.value(-h)) / h;
  cert.fd_right = (loss.value(h) - v0) / h;
  const bool differentiable =
      std::abs(cert.fd_left - cert.fd_right) <= 1e-4 * (1.0 + std::abs(cert.fd_right));
  cert.derivative_ok = differentiable && cert.deriv_at_zero < 0.0 &&
                       0.5 * (cert.fd_left + cert.fd_right) < 0.0;

  cert.gap_ok = true;
  cert.min_gap = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 99; ++i) {
    if (i == 50) continue;
    const double eta = i / 100.0;
    const ConditionalRiskProblem problem(loss, eta);
    const double hv = compute_H(problem).value;
    const double hm = compute_H_minus(problem);
    const double gap = hm - hv;
    cert.gaps.push_back({eta, hv, hm, gap});
    cert.min_gap = std::min(cert.min_gap, gap);
    if (!(gap > margin)) cert.gap_ok = false;
  }
  cert.calibrated = cert.derivative_ok && cert.gap_ok;
  return cert;
}

PsiTransform::PsiTransform(PsiConstruction construction, std::vector<double> grid,
                           std::vector<double> values, std::optional<double> gamma)
    : construction_(construction), grid_(std::move(grid)), values_(std::move(values)), gamma_(gamma) {
  if (grid_.size() < 2 || grid_.size() != values_.size()) {
    throw InvalidArgument("psi table needs >= 2 grid points and matching values");
  }
}

PsiTransform PsiTransform::closed_form(double gamma, std::size_t grid_size) {
  check_gamma(gamma);
  if (grid_size < 2) throw InvalidArgument("grid_size must be >= 2");
  std::vector<double> grid(grid_size);
  std::vector<double> values(grid_size);
  const double step = 1.0 / static_cast<double>(grid_size - 1);
  for (std::size_t i = 0; i < grid_size; ++i) grid[i] = static_cast<double>(i) * step;
  parallel::tabulate([&](std::size_t i) { return psi_smoothed_hinge_closed(grid[i], gamma).value; },
                     values);
  return PsiTransform(PsiConstruction::closed_form_smoothed_hinge, std::move(grid), std::move(values),
                      gamma);
}

double PsiTransform::operator()(double z) const {
  z = std::clamp(z, 0.0, 1.0);
  auto it = std::upper_bound(grid_.begin(), grid_.end(), z);
  if (it == grid_.end()) return values_.back();
  const auto hi = static_cast<std::size_t>(it - grid_.begin());
  if (hi == 0) return values_.front();
  const std::size_t lo = hi - 1;
  const double w = (z - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return values_[lo] + w * (values_[hi] - values_[lo]);
}

bool PsiTransform::is_nondecreasing(double tol) const {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < values_[i - 1] - tol) return false;
  }
  return true;
}

bool PsiTransform::is_convex(double tol) const {
  for (std::size_t i = 1; i + 1 < values_.size(); ++i) {
    if (values_[i] > 0.5 * (values_[i - 1] + values_[i + 1]) + tol) return false;
  }
  return true;
}

std::vector<double> lower_convex_envelope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw InvalidArgument("envelope needs matching, nonempty inputs");
  // monotone chain, lower half
  std::vector<std::size_t> hull;
  hull.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<double> out(x.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (seg + 1 < hull.size() && hull[seg + 1] < i) ++seg;
    if (seg + 1 >= hull.size() || hull[seg] == i) {
      out[i] = y[hull[seg]];
      continue;
    }
    const std::size_t a = hull[seg];
    const std::size_t b = hull[seg + 1];
    if (b == i) {
      out[i] = y[b];
      continue;
    }
    const double w = (x[i] - x[a]) / (x[b] - x[a]);
    out[i] = y[a] + w * (y[b] - y[a]);
  }
  return out;
}

PsiTransform psi_numeric(const MarginLoss& loss, std::size_t grid_size) {
  if (grid_size < 2) throw InvalidArgument("grid_size must be >= 2");
  const auto cert = is_calibrated(loss);
  if (!cert.calibrated) {
    throw InvalidArgument("psi_numeric requires a classification-calibrated loss; " + loss.name() +
                          " failed the certificate");
  }
  std::vector<double> grid(grid_size);
  const double step = 1.0 / static_cast<double>(grid_size - 1);
  for (std::size_t i = 0; i < grid_size; ++i) grid[i] = static_cast<double>(i) * step;
  grid.back() = 1.0;

  const double phi0 = loss.value(0.0);
  std::vector<double> h(grid_size);
  std::vector<double> h_minus(grid_size);
  parallel::tabulate(
      [&](std::size_t i) { return compute_H(ConditionalRiskProblem(loss, 0.5 * (1.0 + grid[i]))).value; },
      h);
  parallel::tabulate(
      [&](std::size_t i) { return compute_H_minus(ConditionalRiskProblem(loss, 0.5 * (1.0 + grid[i]))); },
      h_minus);

  std::vector<double> tilde(grid_size);
  std::vector<double> simplified(grid_size);
  double max_gap = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    tilde[i] = h_minus[i] - h[i];
    simplified[i] = phi0 - h[i];
    max_gap = std::max(max_gap, std::abs(tilde[i] - simplified[i]));
  }
  if (max_gap > kSimplificationTolerance) {
    std::ostringstream diag;
    diag << "max |tilde - (phi(0) - H)| = " << max_gap << " for " << loss.name();
    throw NumericFailure("psi tilde disagrees with its simplified form", diag.str());
  }

  auto values = lower_convex_envelope(grid, tilde);
  std::optional<double> gamma;
  if (loss.name() == "smoothed_hinge") gamma = loss.scale();
  PsiTransform psi(PsiConstruction::numeric_convex_closure, std::move(grid), std::move(values), gamma);
  psi.tilde_ = std::move(tilde);
  psi.simplified_ = std::move(simplified);
  psi.max_simplification_gap_ = max_gap;
  return psi;
}

ClampedValue psi_smoothed_hinge_closed(double eta, double gamma) {
  check_gamma(gamma);
  ClampedValue out;
  const double a = std::abs(clamp_eta(eta, out.clamped));
  if (a == 0.0) return out;
  // With s = sqrt(a^2 + (1 - a^2) e^{-2 gamma}):
  //   e^gamma C1 / (1 + a) = (1 - a) / (a + s)
  //   e^gamma C2 / (1 - a) = e^{2 gamma} (a + s) / (1 - a)
  const double s = std::sqrt(a * a + (1.0 - a * a) * std::exp(-2.0 * gamma));
  const double log_as = std::log(a + s);
  const double log_1ma = std::log1p(-a);
  const double u1 = log_1ma - log_as;
  const double u2 = 2.0 * gamma + log_as - log_1ma;
  const double sp_gamma = softplus(gamma);
  out.value = -(1.0 + a) / (2.0 * gamma) * (softplus(u1) - sp_gamma) -
              (1.0 - a) / (2.0 * gamma) * (softplus(u2) - sp_gamma);
  return out;
}

double psi_lower_bound(double eta, double gamma) {
  check_gamma(gamma);
  if (eta == 0.0 || !std::isfinite(eta)) throw InvalidArgument("psi lower bound needs finite eta != 0");
  const double a = std::abs(eta);
  return a - std::log(1.0 / a) / gamma;
}

ClampedValue conditional_minimizer_z(double eta, double gamma) {
  check_gamma(gamma);
  ClampedValue out;
  const double e = clamp_eta(eta, out.clamped);
  const double a = std::abs(e);
  if (a == 0.0) return out;
  // exp(gamma z) = e^gamma (a + s) / (1 - a)
  const double s = std::sqrt(a * a + (1.0 - a * a) * std::exp(-2.0 * gamma));
  const double z = 1.0 + (std::log(a + s) - std::log1p(-a)) / gamma;
  out.value = e > 0.0 ? z : -z;
  return out;
}

double binary_excess_bound(double excess_phi, double gamma) {
  check_gamma(gamma);
  if (!(excess_phi > 0.0) || !std::isfinite(excess_phi)) {
    throw InvalidArgument("convex excess risk must be positive and finite");
  }
  const double log_term = excess_phi < 1.0 ? std::log(1.0 / excess_phi) : 0.0;
  return excess_phi + excess_phi / (1.0 + gamma * excess_phi) * log_term;
}

}  // namespace smoothrisk
