#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "smoothrisk/losses.hpp"

namespace smoothrisk {

/// Conditional surrogate risk at class probability eta:
///   C(alpha) = eta * phi(alpha) + (1 - eta) * phi(-alpha).
class ConditionalRiskProblem {
 public:
  ConditionalRiskProblem(const MarginLoss& loss, double eta);

  const MarginLoss& loss() const noexcept { return *loss_; }
  double eta() const noexcept { return eta_; }

 private:
  const MarginLoss* loss_;
  double eta_;
};

double conditional_risk(const ConditionalRiskProblem& problem, double alpha);
double conditional_risk_deriv(const ConditionalRiskProblem& problem, double alpha);

struct HResult {
  double value = 0.0;
  double minimizer = 0.0;
  /// Minimizer pinned at the bracket cap (infimum approached at infinity).
  bool at_cap = false;
};

/// H(eta): infimum of the conditional risk over all alpha.
HResult compute_H(const ConditionalRiskProblem& problem);

/// H^-(eta): infimum over alpha with alpha (2 eta - 1) <= 0.
double compute_H_minus(const ConditionalRiskProblem& problem);

struct CalibrationGap {
  double eta;
  double h;
  double h_minus;
  double gap;
};

struct CalibrationCertificate {
  bool calibrated = false;
  bool derivative_ok = false;
  bool gap_ok = false;
  double deriv_at_zero = 0.0;        // loss.deriv(0)
  double fd_left = 0.0;              // one-sided difference quotients at 0
  double fd_right = 0.0;
  double margin = 0.0;               // required H^- - H margin
  double min_gap = 0.0;
  std::vector<CalibrationGap> gaps;  // eta in {0.01, ..., 0.99} \ {0.5}
};

/// phi'(0) < 0 (differentiable at 0) and H^-(eta) > H(eta) + margin on the
/// eta grid. Both must hold.
CalibrationCertificate is_calibrated(const MarginLoss& loss, double margin = 1e-10);

enum class PsiConstruction { closed_form_smoothed_hinge, numeric_convex_closure };

// Tabulated psi-transform on a uniform grid over [0, 1]. For the numeric
// construction `tilde` holds H^- - H, `simplified` holds phi(0) - H and
// `values` the lower convex envelope of `tilde`.
class PsiTransform {
 public:
  PsiTransform(PsiConstruction construction, std::vector<double> grid, std::vector<double> values,
               std::optional<double> gamma = std::nullopt);

  /// Tabulates the smoothed-hinge closed form on `grid_size` points.
  static PsiTransform closed_form(double gamma, std::size_t grid_size);

  PsiConstruction construction() const noexcept { return construction_; }
  std::optional<double> gamma() const noexcept { return gamma_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& tilde() const noexcept { return tilde_; }
  const std::vector<double>& simplified() const noexcept { return simplified_; }
  double max_simplification_gap() const noexcept { return max_simplification_gap_; }

  /// Linear interpolation on the grid; z is clamped to [0, 1].
  double operator()(double z) const;

  bool is_nondecreasing(double tol = 1e-12) const;
  /// Discrete midpoint test on consecutive triples.
  bool is_convex(double tol = 1e-12) const;

 private:
  friend PsiTransform psi_numeric(const MarginLoss& loss, std::size_t grid_size);

  PsiConstruction construction_;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> tilde_;
  std::vector<double> simplified_;
  double max_simplification_gap_ = 0.0;
  std::optional<double> gamma_;
};

/// Lower convex envelope of (x_i, y_i) (x strictly increasing), evaluated
/// back on the x_i by linear interpolation.
std::vector<double> lower_convex_envelope(const std::vector<double>& x, const std::vector<double>& y);

/// Tolerance for |tilde - simplified| before psi_numeric rejects the table.
inline constexpr double kSimplificationTolerance = 1e-8;

/// Numeric psi-transform of a convex calibrated loss on `grid_size` >= 2
/// uniform points of [0, 1]. Throws InvalidArgument for an uncalibrated loss
/// and NumericFailure if tilde and simplified forms disagree.
PsiTransform psi_numeric(const MarginLoss& loss, std::size_t grid_size);

struct ClampedValue {
  double value = 0.0;
  /// |eta| was pulled back to 1 - 1e-9.
  bool clamped = false;
};

inline constexpr double kEtaClamp = 1.0 - 1e-9;

/// Closed-form psi of the smoothed hinge loss, evaluated in log space.
ClampedValue psi_smoothed_hinge_closed(double eta, double gamma);

/// |eta| - log(1/|eta|) / gamma. Throws InvalidArgument for eta == 0.
double psi_lower_bound(double eta, double gamma);

/// argmin_z (1+eta)/2 phi(z) + (1-eta)/2 phi(-z) for the smoothed hinge loss.
ClampedValue conditional_minimizer_z(double eta, double gamma);

/// E + E / (1 + gamma E) log(1/E), with the log term dropped for E >= 1.
double binary_excess_bound(double excess_phi, double gamma);

}  // namespace smoothrisk
