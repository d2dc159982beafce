#include "smoothrisk/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smoothrisk/error.hpp"

namespace smoothrisk {
namespace {

void check_args(double z, double gamma) {
  if (!std::isfinite(z)) throw InvalidArgument("margin z must be finite");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("smoothing parameter gamma must be positive and finite");
  }
}

}  // namespace

double softplus(double t) noexcept {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double t) noexcept {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double smoothed_hinge_value(double z, double gamma) {
  check_args(z, gamma);
  const double t = gamma * (1.0 - z);
  if (t > 0.0) return (1.0 - z) + std::log1p(std::exp(-t)) / gamma;
  return std::log1p(std::exp(t)) / gamma;
}

double smoothed_hinge_deriv(double z, double gamma) {
  check_args(z, gamma);
  return -sigmoid(gamma * (1.0 - z));
}

double smoothed_hinge_second_deriv(double z, double gamma) {
  check_args(z, gamma);
  const double t = gamma * (1.0 - z);
  // sigma(t) * sigma(-t) keeps both tails accurate
  return gamma * sigmoid(t) * sigmoid(-t);
}

double variational_maximizer(double z, double gamma) {
  check_args(z, gamma);
  return sigmoid(gamma * (1.0 - z));
}

double binary_entropy(double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) return 0.0;
  return -alpha * std::log(alpha) - (1.0 - alpha) * std::log1p(-alpha);
}

double variational_objective(double alpha, double z, double gamma) {
  check_args(z, gamma);
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("alpha must lie in [0, 1]");
  }
  return alpha * (1.0 - z) + binary_entropy(alpha) / gamma;
}

SmoothLoss::SmoothLoss(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("smoothing parameter gamma must be positive and finite");
  }
}

ReferenceKind parse_reference_kind(std::string_view name) {
  if (name == "hinge") return ReferenceKind::hinge;
  if (name == "exponential") return ReferenceKind::exponential;
  if (name == "logit") return ReferenceKind::logit;
  if (name == "truncated_quadratic") return ReferenceKind::truncated_quadratic;
  throw InvalidArgument("unknown reference loss: " + std::string(name));
}

std::string_view to_string(ReferenceKind kind) noexcept {
  switch (kind) {
    case ReferenceKind::hinge: return "hinge";
    case ReferenceKind::exponential: return "exponential";
    case ReferenceKind::logit: return "logit";
    case ReferenceKind::truncated_quadratic: return "truncated_quadratic";
  }
  return "unknown";
}

double reference_loss_value(ReferenceKind kind, double z) {
  switch (kind) {
    case ReferenceKind::hinge: return std::max(0.0, 1.0 - z);
    case ReferenceKind::exponential: return std::exp(-z);
    case ReferenceKind::logit: return softplus(-z);
    case ReferenceKind::truncated_quadratic: {
      const double m = std::max(0.0, 1.0 - z);
      return m * m;
    }
  }
  throw InvalidArgument("unknown reference loss kind");
}

double reference_loss_deriv(ReferenceKind kind, double z) {
  switch (kind) {
    case ReferenceKind::hinge: return z <= 1.0 ? -1.0 : 0.0;
    case ReferenceKind::exponential: return -std::exp(-z);
    case ReferenceKind::logit: return -sigmoid(-z);
    case ReferenceKind::truncated_quadratic: return -2.0 * std::max(0.0, 1.0 - z);
  }
  throw InvalidArgument("unknown reference loss kind");
}

MarginLoss::MarginLoss(std::string name, std::function<double(double)> value,
                       std::function<double(double)> deriv, double scale)
    : name_(std::move(name)), value_(std::move(value)), deriv_(std::move(deriv)), scale_(scale) {
  if (!(scale > 0.0)) throw InvalidArgument("loss scale must be positive");
}

MarginLoss MarginLoss::smoothed_hinge(double gamma) {
  const SmoothLoss loss(gamma);
  return MarginLoss(
      "smoothed_hinge", [loss](double z) { return loss.value(z); },
      [loss](double z) { return loss.deriv(z); }, gamma);
}

MarginLoss MarginLoss::reference(ReferenceKind kind) {
  const ReferenceLoss loss{kind};
  return MarginLoss(
      std::string(to_string(kind)), [loss](double z) { return loss.value(z); },
      [loss](double z) { return loss.deriv(z); });
}

MarginLoss MarginLoss::constant(double c) {
  return MarginLoss(
      "constant", [c](double) { return c; }, [](double) { return 0.0; });
}

MarginLoss MarginLoss::by_name(std::string_view name, double gamma) {
  if (name == "smoothed_hinge") return smoothed_hinge(gamma);
  if (name == "constant") return constant(1.0);
  return reference(parse_reference_kind(name));
}

}  // namespace smoothrisk
