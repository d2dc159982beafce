#pragma once

#include <cstddef>
#include <string_view>

namespace smoothrisk {

// Parameters of the excess-risk rate calculus. The universal constants are
// not known in closed form and default to 1.
struct RateParams {
  double B = 1.0;
  double delta = 0.1;
  double n = 1000.0;
  double k = 100.0;
  double gamma = 1.0;
  double alpha = 1.0;
  double beta = 0.0;
  double xi = 0.0;
  double a = 1.0;
  double K = 1.0;
  double K1 = 1.0;
  double K2 = 1.0;
  double K3 = 1.0;
  double K4 = 1.0;
  double K5 = 1.0;
  double C = 1.0;

  /// log(1/delta) + (log n)^3, natural log.
  double t() const;
  /// Throws InvalidArgument for B <= 0, delta outside (0,1), n < 1, k < 1 or gamma <= 0.
  void validate() const;
};

enum class RiskKind { empirical, true_risk };

/// K_{1|2} ((B + gamma B^2) t / n + sqrt(risk (B + gamma B^2) t / n)).
double generalization_gap_bound(double risk, const RateParams& params, RiskKind which);

/// gamma B^2/(k+2)^2 + K((B+gamma B^2)t/n + sqrt(R*(B+gamma B^2)t/n)
///                       + sqrt(gamma B^2 (B+gamma B^2) t / ((k+2)^2 n))).
double excess_phi_bound(const RateParams& params, double r_phi_star);

/// C (n^{beta-alpha} + n^{beta-1} + n^{beta-(alpha+1)/2} + sqrt(R*) n^{(beta-1)/2}).
double corollary_bound(double n, double alpha, double beta, double r_phi_star, double C);

/// R_hinge* + a / gamma^{1+xi}.
double r_phi_star_assumption(double r_hinge_star, double a, double xi, double gamma);

/// min(1/2, alpha - 1/2) / (1 + xi). Throws InvalidArgument for alpha < 1/2 or xi < 0.
double select_beta(double alpha, double xi);

struct TauExponents {
  double tau1;
  double tau2;
};

/// tau1 = (1 + 2 xi min(1, alpha)) / (2 (1 + xi)), tau2 = (1/2 + xi) / (2 (1 + xi)).
TauExponents tau_exponents(double alpha, double xi);

/// (1 + xi) / (1/2 + xi min(1, 2 alpha - 1)), the closed form of 1 / (2 tau1 - 2 tau2).
double n0_exponent_closed(double alpha, double xi);

/// K3 (1 / R_hinge*)^{1 / (2 tau1 - 2 tau2)}; +infinity when R_hinge* == 0.
double n0_threshold(double r_hinge_star, const RateParams& params);

enum class Regime { small_n, large_n };
std::string_view to_string(Regime regime) noexcept;

struct RegimeBound {
  double value;
  Regime regime;
  /// beta selected for this n: select_beta below n0, 0 above.
  double beta;
};

/// K4 n^{-tau1} log n for n <= n0, K5 n^{-1/2} log n otherwise.
RegimeBound regime_bound(double n, double r_hinge_star, const RateParams& params);

}  // namespace smoothrisk
