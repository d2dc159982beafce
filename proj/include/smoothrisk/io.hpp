#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "smoothrisk/calibration.hpp"
#include "smoothrisk/dataset.hpp"
#include "smoothrisk/rates.hpp"
#include "smoothrisk/rkhs_solver.hpp"
#include "smoothrisk/sweep.hpp"
#include "smoothrisk/synthetic.hpp"

namespace smoothrisk {

inline constexpr int kCsvSchemaVersion = 1;

nlohmann::json to_json(const KernelSpec& kernel);
KernelSpec kernel_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);

/// Model file: {kernel, B, gamma, points, coeffs, trace}.
struct SavedModel {
  KernelModel model;
  double gamma = 1.0;
  std::vector<TraceEntry> trace;
};
nlohmann::json to_json(const SavedModel& saved);
SavedModel saved_model_from_json(const nlohmann::json& j);

/// Columns x0..x{d-1},label[,eta]; lines starting with '#' are comments.
Dataset read_dataset_csv(std::istream& in);
void write_dataset_csv(std::ostream& out, const Dataset& data);

/// Columns s,empirical_risk,suboptimality_bound.
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

/// Columns z,psi_tilde,psi,lower_bound. lower_bound is only defined for the
/// smoothed hinge loss (empty otherwise and at z = 0).
void write_psi_csv(std::ostream& out, const PsiTransform& psi);

nlohmann::json to_json(const CalibrationCertificate& cert, const std::string& loss_name);

/// Sweep config; missing keys keep SweepConfig defaults.
SweepConfig sweep_config_from_json(const nlohmann::json& j);

struct RatesConfig {
  RateParams params;
  double r_hinge_star = 0.01;
  std::vector<double> ns;
};

/// Reads alpha, xi, B, delta, gamma, a, constants, r_hinge_star and an n
/// range given either as "ns": [...] or "n_min"/"n_max"/"n_points" (log spaced).
RatesConfig rates_config_from_json(const nlohmann::json& j);

/// Columns n,beta,tau1,tau2,n0,regime,bound_value.
void write_rates_csv(std::ostream& out, const RatesConfig& config);

/// Shortest round-trip text for a double ("nan", "inf" for non-finite).
std::string format_double(double v);

}  // namespace smoothrisk
