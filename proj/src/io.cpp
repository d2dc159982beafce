#include "smoothrisk/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "smoothrisk/error.hpp"

namespace smoothrisk {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const KernelSpec& kernel) {
  nlohmann::json j{{"kind", std::string(to_string(kernel.kind))}};
  switch (kernel.kind) {
    case KernelKind::rbf: j["bandwidth"] = kernel.bandwidth; break;
    case KernelKind::linear: break;
    case KernelKind::polynomial:
      j["degree"] = kernel.degree;
      j["offset"] = kernel.offset;
      break;
  }
  return j;
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
  KernelSpec k;
  k.kind = parse_kernel_kind(j.value("kind", std::string("rbf")));
  k.bandwidth = j.value("bandwidth", 0.0);
  k.degree = j.value("degree", 2);
  k.offset = j.value("offset", 1.0);
  k.validate();
  return k;
}

nlohmann::json to_json(const SyntheticSpec& spec) {
  return {{"family", std::string(to_string(spec.family))},
          {"dim", spec.dim},
          {"epsilon", spec.epsilon},
          {"flip_prob", spec.flip_prob},
          {"weight_scale", spec.weight_scale},
          {"seed", spec.seed}};
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
  SyntheticSpec s;
  s.family = parse_family(j.value("family", std::string("margin_blobs")));
  s.dim = j.value("dim", std::size_t{2});
  s.epsilon = j.value("epsilon", 0.5);
  s.flip_prob = j.value("flip_prob", 0.1);
  s.weight_scale = j.value("weight_scale", 2.0);
  s.seed = j.value("seed", std::uint64_t{0});
  s.validate();
  return s;
}

nlohmann::json to_json(const SavedModel& saved) {
  const auto& m = saved.model;
  nlohmann::json points = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.points.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.points.cols(); ++c) row.push_back(m.points(i, c));
    points.push_back(std::move(row));
  }
  nlohmann::json coeffs(std::vector<double>(m.coeffs.data(), m.coeffs.data() + m.coeffs.size()));
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : saved.trace) {
    trace.push_back({{"s", t.s}, {"empirical_risk", t.empirical_risk}, {"suboptimality_bound", t.suboptimality_bound}});
  }
  return {{"kernel", to_json(m.kernel)}, {"B", m.norm_bound}, {"gamma", saved.gamma},
          {"points", std::move(points)},  {"coeffs", std::move(coeffs)}, {"trace", std::move(trace)}};
}

SavedModel saved_model_from_json(const nlohmann::json& j) {
  SavedModel saved;
  saved.model.kernel = kernel_from_json(j.at("kernel"));
  saved.model.norm_bound = j.at("B").get<double>();
  saved.gamma = j.value("gamma", 1.0);
  const auto& pts = j.at("points");
  const auto coeffs = j.at("coeffs").get<std::vector<double>>();
  if (pts.size() != coeffs.size()) throw InvalidArgument("model file: points and coeffs differ in length");
  const std::size_t d = pts.empty() ? 0 : pts[0].size();
  saved.model.points.resize(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != d) throw InvalidArgument("model file: ragged points");
    for (std::size_t c = 0; c < d; ++c) {
      saved.model.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = pts[i][c].get<double>();
    }
  }
  saved.model.coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
  if (j.contains("trace")) {
    for (const auto& t : j["trace"]) {
      saved.trace.push_back({t.at("s").get<std::size_t>(), t.at("empirical_risk").get<double>(),
                             t.at("suboptimality_bound").get<double>()});
    }
  }
  return saved;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end == s.c_str()) throw InvalidArgument("dataset CSV: not a number: '" + s + "'");
  return v;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size()) throw InvalidArgument("dataset CSV: row width differs from header");
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(to_double(f));
    rows.push_back(std::move(row));
  }
  std::ptrdiff_t label_col = -1;
  std::ptrdiff_t eta_col = -1;
  std::vector<std::size_t> x_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "label") {
      label_col = static_cast<std::ptrdiff_t>(i);
    } else if (header[i] == "eta") {
      eta_col = static_cast<std::ptrdiff_t>(i);
    } else {
      x_cols.push_back(i);
    }
  }
  if (label_col < 0) throw InvalidArgument("dataset CSV needs a 'label' column");
  if (x_cols.empty()) throw InvalidArgument("dataset CSV has no feature columns");
  Dataset data;
  data.instances.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(x_cols.size()));
  data.labels.resize(static_cast<Eigen::Index>(rows.size()));
  std::vector<double> eta;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < x_cols.size(); ++c) {
      data.instances(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][x_cols[c]];
    }
    data.labels[static_cast<Eigen::Index>(r)] = rows[r][static_cast<std::size_t>(label_col)];
    if (eta_col >= 0) eta.push_back(rows[r][static_cast<std::size_t>(eta_col)]);
  }
  if (eta_col >= 0) data.eta = std::move(eta);
  data.validate();
  return data;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  out << "# schema_version=" << kCsvSchemaVersion << '\n';
  for (std::size_t c = 0; c < data.dim(); ++c) out << 'x' << c << ',';
  out << "label" << (data.eta ? ",eta" : "") << '\n';
  for (Eigen::Index i = 0; i < data.instances.rows(); ++i) {
    for (Eigen::Index c = 0; c < data.instances.cols(); ++c) out << format_double(data.instances(i, c)) << ',';
    out << (data.labels[i] > 0 ? "1" : "-1");
    if (data.eta) out << ',' << format_double((*data.eta)[static_cast<std::size_t>(i)]);
    out << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "# schema_version=" << kCsvSchemaVersion << '\n';
  out << "s,empirical_risk,suboptimality_bound\n";
  for (const auto& t : trace) {
    out << t.s << ',' << format_double(t.empirical_risk) << ',' << format_double(t.suboptimality_bound) << '\n';
  }
}

void write_psi_csv(std::ostream& out, const PsiTransform& psi) {
  out << "# schema_version=" << kCsvSchemaVersion << '\n';
  out << "z,psi_tilde,psi,lower_bound\n";
  const auto& z = psi.grid();
  const auto& tilde = psi.tilde().empty() ? psi.values() : psi.tilde();
  for (std::size_t i = 0; i < z.size(); ++i) {
    out << format_double(z[i]) << ',' << format_double(tilde[i]) << ',' << format_double(psi.values()[i]) << ',';
    if (psi.gamma() && z[i] > 0.0) out << format_double(psi_lower_bound(z[i], *psi.gamma()));
    out << '\n';
  }
}

nlohmann::json to_json(const CalibrationCertificate& cert, const std::string& loss_name) {
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& g : cert.gaps) {
    gaps.push_back({{"eta", g.eta}, {"H", g.h}, {"H_minus", g.h_minus}, {"gap", g.gap}});
  }
  return {{"loss", loss_name},
          {"calibrated", cert.calibrated},
          {"derivative_ok", cert.derivative_ok},
          {"gap_ok", cert.gap_ok},
          {"deriv_at_zero", cert.deriv_at_zero},
          {"fd_left", cert.fd_left},
          {"fd_right", cert.fd_right},
          {"margin", cert.margin},
          {"min_gap", cert.min_gap},
          {"gaps", std::move(gaps)}};
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig c;
  if (j.contains("spec")) c.spec = synthetic_spec_from_json(j["spec"]);
  if (j.contains("kernel")) c.kernel = kernel_from_json(j["kernel"]);
  c.bound = j.value("B", c.bound);
  if (j.contains("gammas")) c.gammas = j["gammas"].get<std::vector<double>>();
  if (j.contains("ks")) c.ks = j["ks"].get<std::vector<std::size_t>>();
  if (j.contains("ns")) c.ns = j["ns"].get<std::vector<std::size_t>>();
  c.repetitions = j.value("repetitions", c.repetitions);
  c.mc_samples = j.value("mc_samples", c.mc_samples);
  c.master_seed = j.value("seed", c.master_seed);
  c.lemma1_reference = j.value("lemma1_reference", c.lemma1_reference);
  c.bayes_samples = j.value("bayes_samples", c.bayes_samples);
  if (j.contains("reference")) {
    const auto& r = j["reference"];
    c.reference.max_iterations = r.value("max_iterations", c.reference.max_iterations);
    c.reference.gap_tolerance = r.value("gap_tolerance", c.reference.gap_tolerance);
    c.reference.risk_tolerance = r.value("risk_tolerance", c.reference.risk_tolerance);
    c.reference.stall_checks = r.value("stall_checks", c.reference.stall_checks);
    c.reference.check_every = r.value("check_every", c.reference.check_every);
  }
  c.ball_r_phi_star = j.value("ball_r_phi_star", c.ball_r_phi_star);
  if (j.contains("ball")) {
    c.ball.n = j["ball"].value("n", c.ball.n);
    c.ball.m = j["ball"].value("m", c.ball.m);
  }
  c.validate();
  return c;
}

RatesConfig rates_config_from_json(const nlohmann::json& j) {
  RatesConfig c;
  auto& p = c.params;
  p.alpha = j.value("alpha", p.alpha);
  p.xi = j.value("xi", p.xi);
  p.B = j.value("B", p.B);
  p.delta = j.value("delta", p.delta);
  p.gamma = j.value("gamma", p.gamma);
  p.a = j.value("a", p.a);
  if (j.contains("constants")) {
    const auto& k = j["constants"];
    p.K = k.value("K", p.K);
    p.K1 = k.value("K1", p.K1);
    p.K2 = k.value("K2", p.K2);
    p.K3 = k.value("K3", p.K3);
    p.K4 = k.value("K4", p.K4);
    p.K5 = k.value("K5", p.K5);
    p.C = k.value("C", p.C);
  }
  c.r_hinge_star = j.value("r_hinge_star", c.r_hinge_star);
  if (j.contains("ns")) {
    c.ns = j["ns"].get<std::vector<double>>();
  } else {
    const double lo = j.value("n_min", 1e2);
    const double hi = j.value("n_max", 1e6);
    const int points = j.value("n_points", 9);
    if (!(lo >= 1.0) || !(hi >= lo) || points < 1) throw InvalidArgument("rates: bad n range");
    for (int i = 0; i < points; ++i) {
      const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
      c.ns.push_back(std::round(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))));
    }
  }
  if (!(c.r_hinge_star >= 0.0)) throw InvalidArgument("rates: r_hinge_star must be nonnegative");
  select_beta(p.alpha, p.xi);  // validates alpha, xi
  return c;
}

void write_rates_csv(std::ostream& out, const RatesConfig& config) {
  out << "# schema_version=" << kCsvSchemaVersion << '\n';
  out << "n,beta,tau1,tau2,n0,regime,bound_value\n";
  const auto tau = tau_exponents(config.params.alpha, config.params.xi);
  const double n0 = n0_threshold(config.r_hinge_star, config.params);
  for (double n : config.ns) {
    const auto rb = regime_bound(n, config.r_hinge_star, config.params);
    out << (n == std::floor(n) && n < 1e15 ? std::to_string(static_cast<long long>(n)) : format_double(n)) << ','
        << format_double(rb.beta) << ',' << format_double(tau.tau1) << ','
        << format_double(tau.tau2) << ',' << format_double(n0) << ',' << to_string(rb.regime) << ','
        << format_double(rb.value) << '\n';
  }
}

}  // namespace smoothrisk
