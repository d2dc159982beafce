#include "smoothrisk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smoothrisk/calibration.hpp"
#include "smoothrisk/error.hpp"

namespace smoothrisk {
namespace {

double translation_bound(double excess_phi, double gamma) {
  return excess_phi > 0.0 ? binary_excess_bound(excess_phi, gamma) : 0.0;
}

double sq(double v) { return std::isfinite(v) ? v * v : 0.0; }

}  // namespace

VerificationSummary verify_report(const std::vector<RiskReport>& rows, const VerifyOptions& options) {
  if (rows.empty()) throw InvalidArgument("verify_report needs at least one row");
  VerificationSummary summary;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  summary.worst_thm1_margin = kInf;
  summary.worst_thm4_margin = kInf;
  summary.worst_lemma1_margin = kInf;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RiskReport& r = rows[i];
    RowCheck check;
    check.row = i;
    if (!r.error.empty() || !std::isfinite(r.excess_binary) || !std::isfinite(r.excess_phi)) {
      check.skipped = true;
      ++summary.skipped;
      summary.rows.push_back(check);
      continue;
    }
    ++summary.checked;
    check.combined_stderr = std::sqrt(sq(r.mc_binary_stderr) + sq(r.mc_phi_stderr) + sq(r.bayes_stderr) +
                                      sq(r.r_phi_star_stderr));
    const double s = options.sigmas * check.combined_stderr;

    const double e_low = std::clamp(r.excess_binary - s, 0.0, 1.0);
    const double psi = e_low > 0.0 ? psi_smoothed_hinge_closed(e_low, r.gamma).value : 0.0;
    check.thm1_margin = (r.excess_phi + s) - psi;
    check.thm1_pass = check.thm1_margin >= 0.0;

    check.thm4_margin = translation_bound(r.excess_phi + s, r.gamma) - (r.excess_binary - s);
    check.thm4_pass = check.thm4_margin >= 0.0;

    if (std::isfinite(r.ref_emp_phi_risk) && std::isfinite(r.emp_phi_risk)) {
      check.lemma1_margin = r.lemma1_bound + options.lemma1_slack - (r.emp_phi_risk - r.ref_emp_phi_risk);
      check.lemma1_pass = check.lemma1_margin >= 0.0;
      ++summary.lemma1_checked;
      if (!*check.lemma1_pass) ++summary.lemma1_violations;
      summary.worst_lemma1_margin = std::min(summary.worst_lemma1_margin, check.lemma1_margin);
    }

    if (!check.thm1_pass) ++summary.thm1_violations;
    if (!check.thm4_pass) ++summary.thm4_violations;
    summary.worst_thm1_margin = std::min(summary.worst_thm1_margin, check.thm1_margin);
    summary.worst_thm4_margin = std::min(summary.worst_thm4_margin, check.thm4_margin);
    summary.rows.push_back(check);
  }
  return summary;
}

nlohmann::json VerificationSummary::to_json() const {
  auto finite_or_null = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json j;
  j["all_pass"] = all_pass();
  j["checked"] = checked;
  j["skipped"] = skipped;
  j["psi_transform"] = {{"violations", thm1_violations}, {"worst_margin", finite_or_null(worst_thm1_margin)}};
  j["translation_bound"] = {{"violations", thm4_violations}, {"worst_margin", finite_or_null(worst_thm4_margin)}};
  j["optimization_bound"] = {{"checked", lemma1_checked},
                             {"violations", lemma1_violations},
                             {"worst_margin", finite_or_null(worst_lemma1_margin)}};
  auto& arr = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json jr{{"row", r.row}, {"skipped", r.skipped}};
    if (!r.skipped) {
      jr["combined_stderr"] = r.combined_stderr;
      jr["psi_transform"] = {{"pass", r.thm1_pass}, {"margin", r.thm1_margin}};
      jr["translation_bound"] = {{"pass", r.thm4_pass}, {"margin", r.thm4_margin}};
      if (r.lemma1_pass) jr["optimization_bound"] = {{"pass", *r.lemma1_pass}, {"margin", r.lemma1_margin}};
    }
    arr.push_back(std::move(jr));
  }
  return j;
}

}  // namespace smoothrisk
