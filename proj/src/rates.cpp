#include "smoothrisk/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smoothrisk/error.hpp"

namespace smoothrisk {
namespace {

void check_alpha_xi(double alpha, double xi) {
  if (!(alpha >= 0.5) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be >= 1/2");
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw InvalidArgument("xi must be >= 0");
}

double complexity(const RateParams& p) { return (p.B + p.gamma * p.B * p.B) * p.t() / p.n; }

}  // namespace

double RateParams::t() const {
  const double ln = std::log(n);
  return std::log(1.0 / delta) + ln * ln * ln;
}

void RateParams::validate() const {
  if (!(B > 0.0)) throw InvalidArgument("B must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (!(n >= 1.0)) throw InvalidArgument("n must be >= 1");
  if (!(k >= 1.0)) throw InvalidArgument("k must be >= 1");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
}

double generalization_gap_bound(double risk, const RateParams& params, RiskKind which) {
  params.validate();
  if (!(risk >= 0.0)) throw InvalidArgument("risk must be nonnegative");
  const double c = complexity(params);
  const double K = which == RiskKind::empirical ? params.K1 : params.K2;
  return K * (c + std::sqrt(risk * c));
}

double excess_phi_bound(const RateParams& params, double r_phi_star) {
  params.validate();
  if (!(r_phi_star >= 0.0)) throw InvalidArgument("R_phi* must be nonnegative");
  const double k2 = (params.k + 2.0) * (params.k + 2.0);
  const double gb2 = params.gamma * params.B * params.B;
  const double c = complexity(params);
  return gb2 / k2 + params.K * (c + std::sqrt(r_phi_star * c) + std::sqrt(gb2 * c / k2));
}

double corollary_bound(double n, double alpha, double beta, double r_phi_star, double C) {
  if (!(n >= 1.0)) throw InvalidArgument("n must be >= 1");
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw InvalidArgument("alpha and beta must be nonnegative");
  if (!(r_phi_star >= 0.0)) throw InvalidArgument("R_phi* must be nonnegative");
  return C * (std::pow(n, beta - alpha) + std::pow(n, beta - 1.0) + std::pow(n, beta - 0.5 * (alpha + 1.0)) +
              std::sqrt(r_phi_star) * std::pow(n, 0.5 * (beta - 1.0)));
}

double r_phi_star_assumption(double r_hinge_star, double a, double xi, double gamma) {
  if (!(a > 0.0) || !(xi >= 0.0) || !(gamma > 0.0)) {
    throw InvalidArgument("need a > 0, xi >= 0, gamma > 0");
  }
  return r_hinge_star + a / std::pow(gamma, 1.0 + xi);
}

double select_beta(double alpha, double xi) {
  check_alpha_xi(alpha, xi);
  return std::min(0.5, alpha - 0.5) / (1.0 + xi);
}

TauExponents tau_exponents(double alpha, double xi) {
  check_alpha_xi(alpha, xi);
  return {(1.0 + 2.0 * xi * std::min(1.0, alpha)) / (2.0 * (1.0 + xi)), (0.5 + xi) / (2.0 * (1.0 + xi))};
}

double n0_exponent_closed(double alpha, double xi) {
  check_alpha_xi(alpha, xi);
  return (1.0 + xi) / (0.5 + xi * std::min(1.0, 2.0 * alpha - 1.0));
}

double n0_threshold(double r_hinge_star, const RateParams& params) {
  if (!(r_hinge_star >= 0.0)) throw InvalidArgument("R_hinge* must be nonnegative");
  if (r_hinge_star == 0.0) return std::numeric_limits<double>::infinity();
  const auto tau = tau_exponents(params.alpha, params.xi);
  return params.K3 * std::pow(1.0 / r_hinge_star, 1.0 / (2.0 * tau.tau1 - 2.0 * tau.tau2));
}

std::string_view to_string(Regime regime) noexcept {
  return regime == Regime::small_n ? "small_n" : "large_n";
}

RegimeBound regime_bound(double n, double r_hinge_star, const RateParams& params) {
  if (!(n >= 1.0)) throw InvalidArgument("n must be >= 1");
  check_alpha_xi(params.alpha, params.xi);
  const double n0 = n0_threshold(r_hinge_star, params);
  if (n <= n0) {
    const auto tau = tau_exponents(params.alpha, params.xi);
    return {params.K4 * std::pow(n, -tau.tau1) * std::log(n), Regime::small_n, select_beta(params.alpha, params.xi)};
  }
  return {params.K5 * std::log(n) / std::sqrt(n), Regime::large_n, 0.0};
}

}  // namespace smoothrisk
