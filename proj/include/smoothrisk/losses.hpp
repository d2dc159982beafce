#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace smoothrisk {

// Smoothed hinge loss  phi(z; gamma) = (1/gamma) log(1 + exp(gamma (1 - z))),
// the entropy-regularized maximum of alpha (1 - z) over alpha in [0, 1].
// All functions throw InvalidArgument for non-finite z or gamma <= 0.

double smoothed_hinge_value(double z, double gamma);
double smoothed_hinge_deriv(double z, double gamma);
double smoothed_hinge_second_deriv(double z, double gamma);

/// Maximizing alpha of the variational form: 1 / (1 + exp(-gamma (1 - z))).
double variational_maximizer(double z, double gamma);

/// Binary entropy with R(0) = R(1) = 0.
double binary_entropy(double alpha);

/// alpha (1 - z) + binary_entropy(alpha) / gamma, for alpha in [0, 1].
double variational_objective(double alpha, double z, double gamma);

/// Numerically safe log(1 + exp(t)).
double softplus(double t) noexcept;
/// Numerically safe 1 / (1 + exp(-t)).
double sigmoid(double t) noexcept;

class SmoothLoss {
 public:
  explicit SmoothLoss(double gamma);

  double gamma() const noexcept { return gamma_; }
  double value(double z) const { return smoothed_hinge_value(z, gamma_); }
  double deriv(double z) const { return smoothed_hinge_deriv(z, gamma_); }
  double second_deriv(double z) const { return smoothed_hinge_second_deriv(z, gamma_); }
  double maximizer(double z) const { return variational_maximizer(z, gamma_); }

 private:
  double gamma_;
};

enum class ReferenceKind { hinge, exponential, logit, truncated_quadratic };

ReferenceKind parse_reference_kind(std::string_view name);
std::string_view to_string(ReferenceKind kind) noexcept;

double reference_loss_value(ReferenceKind kind, double z);
/// Derivative; at the hinge kinks (z = 1) the left derivative is returned.
double reference_loss_deriv(ReferenceKind kind, double z);

struct ReferenceLoss {
  ReferenceKind kind;

  double value(double z) const { return reference_loss_value(kind, z); }
  double deriv(double z) const { return reference_loss_deriv(kind, z); }
};

// Type-erased margin loss used by the calibration engine. `scale` is the
// curvature scale that bounds the bracket search (gamma for smoothed hinge,
// 1 otherwise).
class MarginLoss {
 public:
  MarginLoss(std::string name, std::function<double(double)> value,
             std::function<double(double)> deriv, double scale = 1.0);

  static MarginLoss smoothed_hinge(double gamma);
  static MarginLoss reference(ReferenceKind kind);
  static MarginLoss constant(double c);
  /// Accepts "smoothed_hinge", "hinge", "exponential", "logit",
  /// "truncated_quadratic" and "constant".
  static MarginLoss by_name(std::string_view name, double gamma = 1.0);

  const std::string& name() const noexcept { return name_; }
  double scale() const noexcept { return scale_; }
  double value(double z) const { return value_(z); }
  double deriv(double z) const { return deriv_(z); }

 private:
  std::string name_;
  std::function<double(double)> value_;
  std::function<double(double)> deriv_;
  double scale_;
};

}  // namespace smoothrisk
