// Acceptance suite: one PASS/FAIL line per criterion. Each criterion checks
// its numeric tolerance and its wall-clock budget. Pass criterion numbers as
// arguments to run a subset (e.g. `acceptance 1 6`).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "smoothrisk/calibration.hpp"
#include "smoothrisk/losses.hpp"
#include "smoothrisk/rates.hpp"
#include "smoothrisk/rkhs_solver.hpp"
#include "smoothrisk/sweep.hpp"
#include "smoothrisk/synthetic.hpp"
#include "smoothrisk/verify.hpp"

using namespace smoothrisk;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = false;
  std::string detail;
};

const std::vector<double> kGammas{0.5, 1, 2, 5, 10, 50};

std::vector<double> eta_grid() {
  std::vector<double> out;
  for (int i = -99; i <= 99; ++i) out.push_back(i / 100.0);
  return out;
}

std::vector<double> z_grid() {
  std::vector<double> out;
  for (int i = -1000; i <= 1000; ++i) out.push_back(i / 100.0);
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// 1. closed form vs numeric psi on a 1e5-interval grid
Outcome psi_oracle() {
  constexpr std::size_t kGrid = 100001;  // eta = i/100 lands on grid nodes
  double worst = 0.0;
  for (double g : kGammas) {
    const PsiTransform numeric = psi_numeric(MarginLoss::smoothed_hinge(g), kGrid);
    for (double eta : eta_grid()) {
      const auto idx = static_cast<std::size_t>(std::lround(std::abs(eta) * (kGrid - 1)));
      const double diff = std::abs(psi_smoothed_hinge_closed(eta, g).value - numeric.values()[idx]);
      worst = std::max(worst, diff);
    }
  }
  return {worst <= 1e-6, "max |closed - numeric| = " + fmt("%.3e", worst) + " (tol 1e-6)"};
}

// 2. closed form dominates |eta| - log(1/|eta|)/gamma
Outcome lower_bound() {
  double worst = 0.0;
  double worst_eta = 0.0, worst_gamma = 0.0;
  std::size_t violations = 0;
  for (double g : kGammas) {
    for (double eta : eta_grid()) {
      if (eta == 0.0) continue;
      const double margin = psi_smoothed_hinge_closed(eta, g).value - psi_lower_bound(eta, g);
      if (margin < -1e-12) ++violations;
      if (margin < worst) {
        worst = margin;
        worst_eta = eta;
        worst_gamma = g;
      }
    }
  }
  std::string detail = std::to_string(violations) + " grid points below the bound; worst psi - bound = " +
                       fmt("%.3e", worst) + " at eta=" + fmt("%g", worst_eta) + ", gamma=" + fmt("%g", worst_gamma) +
                       " (tol -1e-12)";
  return {violations == 0, detail};
}

// 3. gamma = 1000 approaches the hinge transform |eta|
Outcome hinge_limit() {
  double worst = 0.0;
  for (int i = 100; i <= 990; ++i) {
    const double a = i / 1000.0;
    worst = std::max(worst, std::abs(psi_smoothed_hinge_closed(a, 1000.0).value - a));
    worst = std::max(worst, std::abs(psi_smoothed_hinge_closed(-a, 1000.0).value - a));
  }
  return {worst <= 1e-2, "max ||eta| - psi(eta; 1000)| = " + fmt("%.3e", worst) + " (tol 1e-2)"};
}

// 4. softplus form equals the maximized variational objective, both at the
//    analytic maximizer and by golden-section maximization over alpha
Outcome variational_identity() {
  double worst_analytic = 0.0, worst_search = 0.0;
  for (double g : kGammas) {
    for (double z : z_grid()) {
      const double v = smoothed_hinge_value(z, g);
      worst_analytic = std::max(worst_analytic, std::abs(variational_objective(variational_maximizer(z, g), z, g) - v));
      double a = 0.0, b = 1.0;
      constexpr double kInvPhi = 0.6180339887498949;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
        if (variational_objective(x1, z, g) >= variational_objective(x2, z, g)) {
          b = x2;
        } else {
          a = x1;
        }
      }
      const double best = std::max({variational_objective(0.5 * (a + b), z, g), variational_objective(0.0, z, g),
                                    variational_objective(1.0, z, g)});
      worst_search = std::max(worst_search, std::abs(best - v));
    }
  }
  const double worst = std::max(worst_analytic, worst_search);
  return {worst <= 1e-8, "max gap: analytic maximizer " + fmt("%.3e", worst_analytic) + ", searched " +
                             fmt("%.3e", worst_search) + " (tol 1e-8)"};
}

// 5. derivative bounds and finite-difference agreement
Outcome derivatives() {
  double worst_fd = 0.0;
  std::size_t bound_violations = 0;
  const double h = 1e-5;
  for (double g : kGammas) {
    for (double z : z_grid()) {
      const double d1 = smoothed_hinge_deriv(z, g);
      const double d2 = smoothed_hinge_second_deriv(z, g);
      if (!(std::abs(d1) <= 1.0) || !(d2 >= 0.0) || !(d2 <= g / 4)) ++bound_violations;
      const double fd1 = (smoothed_hinge_value(z + h, g) - smoothed_hinge_value(z - h, g)) / (2 * h);
      const double fd2 = (smoothed_hinge_deriv(z + h, g) - smoothed_hinge_deriv(z - h, g)) / (2 * h);
      worst_fd = std::max({worst_fd, std::abs(fd1 - d1), std::abs(fd2 - d2)});
    }
  }
  return {bound_violations == 0 && worst_fd <= 1e-5,
          std::to_string(bound_violations) + " bound violations; max |analytic - FD| = " + fmt("%.3e", worst_fd) +
              " (tol 1e-5)"};
}

// 6. accelerated solver suboptimality vs a 1e5-iteration reference
Outcome optimization_rate() {
  constexpr double kB = 3.0, kGamma = 4.0;
  const Dataset data = generate(SyntheticSpec::margin_blobs(0.5, 2, 20240601), 200);
  const EmpiricalRiskProblem problem(data, KernelSpec::rbf(), kB, kGamma);
  const auto ref = train_agd(problem, 100000);
  const double ref_risk = ref.state.trace.back().empirical_risk;
  const double ref_gap = problem.frank_wolfe_gap(ref.model.coeffs);

  std::ostringstream detail;
  bool bound_ok = true;
  std::vector<double> lk, ls;
  double worst_ratio = 0.0;
  for (std::size_t k : {10, 20, 50, 100, 200, 500, 1000}) {
    const double risk = train_agd(problem, k).state.trace.back().empirical_risk;
    const double sub = risk - ref_risk;
    const double bound = kGamma * kB * kB / ((k + 2.0) * (k + 2.0));
    if (!(sub <= bound + 1e-9)) bound_ok = false;
    worst_ratio = std::max(worst_ratio, sub / bound);
    if (k >= 20) {
      if (!(sub > 0.0)) bound_ok = false;  // slope undefined; treat as failure
      lk.push_back(std::log(static_cast<double>(k)));
      ls.push_back(std::log(std::max(sub, 1e-300)));
    }
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lk.size(); ++i) {
    mx += lk[i];
    my += ls[i];
  }
  mx /= static_cast<double>(lk.size());
  my /= static_cast<double>(lk.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lk.size(); ++i) {
    sxy += (lk[i] - mx) * (ls[i] - my);
    sxx += (lk[i] - mx) * (lk[i] - mx);
  }
  const double slope = sxy / sxx;
  detail << "max suboptimality/bound = " << fmt("%.3f", worst_ratio) << ", log-log slope = " << fmt("%.3f", slope)
         << " (<= -1.5); reference gap certificate " << fmt("%.2e", ref_gap);
  return {bound_ok && slope <= -1.5, detail.str()};
}

// 7. calibration certificate
Outcome calibration() {
  std::ostringstream detail;
  bool ok = true;
  for (double g : {0.5, 1.0, 5.0, 50.0}) {
    const auto cert = is_calibrated(MarginLoss::smoothed_hinge(g));
    ok = ok && cert.calibrated;
    detail << "gamma=" << g << (cert.calibrated ? " ok" : " FAILED") << " (min gap " << fmt("%.2e", cert.min_gap)
           << "); ";
  }
  const auto constant = is_calibrated(MarginLoss::constant(1.0));
  ok = ok && !constant.calibrated;
  detail << "constant loss " << (constant.calibrated ? "wrongly accepted" : "rejected");
  return {ok, detail.str()};
}

// 8. exponent identities of the rate calculus
Outcome rate_identities() {
  bool ok = true;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ua(0.5, 3.0), ux(0.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double a = ua(rng), x = ux(rng);
    const auto z = tau_exponents(a, 0.0);
    ok = ok && z.tau1 == 0.5 && z.tau2 == 0.25;
    const auto t = tau_exponents(a, x);
    worst = std::max(worst, std::abs((2 * t.tau1 - 2 * t.tau2) - (0.5 + x * std::min(1.0, 2 * a - 1)) / (1 + x)));
  }
  double jump = 0.0;
  for (double x : {0.0, 0.25, 1.0, 4.0}) {
    jump = std::max({jump, std::abs(select_beta(1.0 - 1e-12, x) - select_beta(1.0, x)),
                     std::abs(select_beta(1.0 + 1e-12, x) - select_beta(1.0, x))});
  }
  ok = ok && worst <= 1e-12 && jump <= 1e-11;
  return {ok, "xi=0 collapse exact; identity max err " + fmt("%.2e", worst) + " (tol 1e-12); beta jump at alpha=1 " +
                  fmt("%.2e", jump)};
}

SweepConfig end_to_end_config(const SyntheticSpec& spec) {
  SweepConfig c;
  c.spec = spec;
  c.kernel = KernelSpec::rbf();
  c.bound = 3.0;
  c.gammas = {1, 4, 16, 64};
  c.ks = {50, 500};
  c.ns = {200, 1000};
  c.repetitions = 3;
  c.mc_samples = 100000;
  c.master_seed = 20240917;
  c.lemma1_reference = false;
  return c;
}

std::vector<SweepConfig> end_to_end_configs() {
  return {end_to_end_config(SyntheticSpec::margin_blobs(0.5, 2)),
          end_to_end_config(SyntheticSpec::noisy_halfspace(0.1, 2))};
}

std::string sweep_text(const std::vector<RiskReport>& rows) {
  std::ostringstream out;
  write_sweep_csv(out, rows, false);
  return out.str();
}

std::vector<std::string> first_sweep;

// 9. end-to-end psi-transform and translation inequalities on sweeps
Outcome end_to_end() {
  std::ostringstream detail;
  bool ok = true;
  first_sweep.clear();
  for (const auto& config : end_to_end_configs()) {
    const auto rows = run_sweep(config);
    first_sweep.push_back(sweep_text(rows));
    const auto s = verify_report(rows);
    const bool pass = s.thm1_violations == 0 && s.thm4_violations == 0 && s.skipped == 0;
    ok = ok && pass;
    detail << to_string(config.spec.family) << ": " << s.checked << " rows, psi violations " << s.thm1_violations
           << ", translation violations " << s.thm4_violations << ", errors " << s.skipped << ", worst margins "
           << fmt("%.3f", s.worst_thm1_margin) << "/" << fmt("%.3f", s.worst_thm4_margin) << "; ";
  }
  std::string text = detail.str();
  text.resize(text.size() - 2);
  return {ok, text};
}

// 10. rerunning the sweeps reproduces the CSV text
Outcome determinism() {
  if (first_sweep.empty()) end_to_end();
  const auto configs = end_to_end_configs();
  std::size_t identical = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (sweep_text(run_sweep(configs[i])) == first_sweep[i]) ++identical;
  }
  return {identical == configs.size(),
          std::to_string(identical) + "/" + std::to_string(configs.size()) + " sweep CSVs byte-identical on rerun"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "psi closed form matches numeric construction", 60, psi_oracle},
      {2, "psi dominates |eta| - log(1/|eta|)/gamma", 5, lower_bound},
      {3, "hinge limit at gamma = 1000", 5, hinge_limit},
      {4, "variational identity", 10, variational_identity},
      {5, "derivative bounds and finite differences", 10, derivatives},
      {6, "accelerated solver suboptimality bound and rate", 300, optimization_rate},
      {7, "calibration certificate", 30, calibration},
      {8, "rate-calculus identities", 1, rate_identities},
      {9, "end-to-end risk inequalities on sweeps", 1200, end_to_end},
      {10, "sweep determinism", 1200, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = out.ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s; %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs, c.budget_s, in_time ? "" : ", EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
