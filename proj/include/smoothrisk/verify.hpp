#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "smoothrisk/sweep.hpp"

namespace smoothrisk {

struct VerifyOptions {
  /// Slack in combined Monte Carlo standard errors.
  double sigmas = 3.0;
  /// Absolute slack on the optimization check.
  double lemma1_slack = 1e-9;
};

// Margins are "bound side minus measured side"; negative means violation.
struct RowCheck {
  std::size_t row = 0;
  double combined_stderr = 0.0;
  bool thm1_pass = true;
  double thm1_margin = 0.0;
  bool thm4_pass = true;
  double thm4_margin = 0.0;
  std::optional<bool> lemma1_pass;
  double lemma1_margin = 0.0;
  bool skipped = false;
};

struct VerificationSummary {
  std::vector<RowCheck> rows;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t thm1_violations = 0;
  std::size_t thm4_violations = 0;
  std::size_t lemma1_checked = 0;
  std::size_t lemma1_violations = 0;
  double worst_thm1_margin = 0.0;
  double worst_thm4_margin = 0.0;
  double worst_lemma1_margin = 0.0;

  bool all_pass() const noexcept { return thm1_violations == 0 && thm4_violations == 0 && lemma1_violations == 0; }
  nlohmann::json to_json() const;
};

// Per row, with s = sigmas * sqrt(sum of squared standard errors):
//   psi-transform:  psi(clamp(E - s, 0, 1); gamma)  <= E_phi + s
//   translation:    E - s <= bound(E_phi + s; gamma)
//   optimization:   emp_phi_risk - ref_emp_phi_risk <= lemma1_bound + slack
// Rows with an error are skipped. Throws InvalidArgument on empty input.
VerificationSummary verify_report(const std::vector<RiskReport>& rows, const VerifyOptions& options = {});

}  // namespace smoothrisk
