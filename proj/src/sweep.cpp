#include "smoothrisk/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "smoothrisk/calibration.hpp"
#include "smoothrisk/error.hpp"
#include "smoothrisk/io.hpp"

namespace smoothrisk {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

struct DataJob {
  std::size_t n_index;
  std::size_t repetition;
};

}  // namespace

void SweepConfig::validate() const {
  spec.validate();
  kernel.validate();
  if (!(bound > 0.0)) throw InvalidArgument("sweep: B must be positive");
  if (gammas.empty() || ks.empty() || ns.empty()) throw InvalidArgument("sweep: grids must be nonempty");
  for (double g : gammas) {
    if (!(g > 0.0)) throw InvalidArgument("sweep: gammas must be positive");
  }
  for (auto k : ks) {
    if (k < 1) throw InvalidArgument("sweep: k must be >= 1");
  }
  for (auto n : ns) {
    if (n < 1) throw InvalidArgument("sweep: n must be >= 1");
  }
  if (repetitions < 1) throw InvalidArgument("sweep: repetitions must be >= 1");
  if (mc_samples < kMinMcSamples) throw InvalidArgument("sweep: mc_samples must be >= 1000");
}

std::vector<RiskReport> run_sweep(const SweepConfig& config) {
  config.validate();
  const std::size_t G = config.gammas.size();
  const std::size_t Kn = config.ks.size();

  // shared quantities are computed before the parallel phase
  const McEstimate bayes = bayes_risk(config.spec, config.bayes_samples);
  std::vector<McEstimate> bayes_phi(G);
  std::vector<double> ball_star(G, kNaN);
  for (std::size_t gi = 0; gi < G; ++gi) {
    bayes_phi[gi] = bayes_phi_risk(config.spec, config.gammas[gi], config.bayes_samples);
    if (config.ball_r_phi_star) {
      ball_star[gi] = estimate_r_phi_star(config.spec, config.kernel, config.bound, config.gammas[gi], config.ball)
                          .estimate;
    }
  }

  std::vector<DataJob> jobs;
  for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
    for (std::size_t r = 0; r < config.repetitions; ++r) jobs.push_back({ni, r});
  }
  std::vector<std::vector<RiskReport>> per_job(jobs.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs.size()); ++j) {
    const DataJob job = jobs[static_cast<std::size_t>(j)];
    const std::size_t n = config.ns[job.n_index];
    const std::uint64_t data_seed = derive_seed(config.master_seed, 0xda7a, job.n_index, job.repetition);
    auto& out = per_job[static_cast<std::size_t>(j)];

    std::optional<EmpiricalRiskProblem> base;
    std::string data_error;
    try {
      base.emplace(generate(config.spec.with_seed(data_seed), n), config.kernel, config.bound, config.gammas[0]);
    } catch (const std::exception& e) {
      data_error = e.what();
    }

    for (std::size_t gi = 0; gi < G; ++gi) {
      const double gamma = config.gammas[gi];
      std::optional<EmpiricalRiskProblem> problem;
      double ref_risk = kNaN;
      double ref_gap = kNaN;
      std::string gamma_error = data_error;
      if (base) {
        try {
          problem.emplace(base->with_gamma(gamma));
          if (config.lemma1_reference) {
            const auto ref = reference_solution(*problem, config.reference);
            ref_risk = ref.risk;
            ref_gap = ref.gap;
          }
        } catch (const std::exception& e) {
          gamma_error = e.what();
        }
      }
      for (std::size_t ki = 0; ki < Kn; ++ki) {
        const std::size_t k = config.ks[ki];
        RiskReport row;
        row.cell = (job.n_index * G + gi) * Kn + ki;
        row.repetition = job.repetition;
        row.gamma = gamma;
        row.k = k;
        row.n = n;
        row.seed = derive_seed(config.master_seed, row.cell, row.repetition);
        row.family = std::string(to_string(config.spec.family));
        row.bayes_risk = bayes.estimate;
        row.bayes_stderr = bayes.std_error;
        row.r_phi_star = bayes_phi[gi].estimate;
        row.r_phi_star_stderr = bayes_phi[gi].std_error;
        row.r_phi_star_ball = ball_star[gi];
        row.lemma1_bound = gamma * config.bound * config.bound / ((k + 2.0) * (k + 2.0));
        row.ref_emp_phi_risk = ref_risk;
        row.ref_gap = ref_gap;
        row.error = gamma_error;
        if (problem && gamma_error.empty()) {
          try {
            const auto trained = train_agd(*problem, k);
            row.bandwidth = problem->kernel().bandwidth;
            row.emp_phi_risk = problem->risk(trained.model.coeffs);
            const auto mc = mc_risks(trained.model, config.spec, gamma, config.mc_samples, row.seed);
            row.mc_phi_risk = mc.phi.estimate;
            row.mc_phi_stderr = mc.phi.std_error;
            row.mc_binary_risk = mc.binary.estimate;
            row.mc_binary_stderr = mc.binary.std_error;
            row.excess_phi = row.mc_phi_risk - row.r_phi_star;
            row.excess_binary = row.mc_binary_risk - row.bayes_risk;
            row.thm4_bound = row.excess_phi > 0.0 ? binary_excess_bound(row.excess_phi, gamma) : 0.0;
          } catch (const std::exception& e) {
            row.error = e.what();
          }
        }
        if (!row.error.empty()) {
          row.emp_phi_risk = row.mc_phi_risk = row.mc_binary_risk = kNaN;
          row.excess_phi = row.excess_binary = row.thm4_bound = kNaN;
          row.mc_phi_stderr = row.mc_binary_stderr = kNaN;
        }
        out.push_back(std::move(row));
      }
    }
  }

  std::vector<RiskReport> rows;
  for (auto& v : per_job) {
    for (auto& r : v) rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), [](const RiskReport& a, const RiskReport& b) {
    return a.cell != b.cell ? a.cell < b.cell : a.repetition < b.repetition;
  });
  return rows;
}

std::vector<std::string> sweep_csv_columns() {
  return {"gamma",          "k",
          "n",              "seed",
          "emp_phi_risk",   "mc_phi_risk",
          "mc_binary_risk", "bayes_risk",
          "excess_phi",     "excess_binary",
          "thm4_bound",     "lemma1_bound",
          "mc_phi_stderr",  "mc_binary_stderr",
          "bayes_stderr",   "r_phi_star",
          "r_phi_star_stderr", "r_phi_star_ball",
          "ref_emp_phi_risk", "ref_gap",
          "family",         "cell",
          "repetition",     "bandwidth",
          "error"};
}

void write_sweep_csv(std::ostream& out, const std::vector<RiskReport>& rows, bool timestamp) {
  out << "# schema_version=" << kSweepSchemaVersion << '\n';
  if (timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated=" << buf << '\n';
  }
  const auto cols = sweep_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    out << format_double(r.gamma) << ',' << r.k << ',' << r.n << ',' << r.seed << ','
        << format_double(r.emp_phi_risk) << ',' << format_double(r.mc_phi_risk) << ','
        << format_double(r.mc_binary_risk) << ',' << format_double(r.bayes_risk) << ','
        << format_double(r.excess_phi) << ',' << format_double(r.excess_binary) << ','
        << format_double(r.thm4_bound) << ',' << format_double(r.lemma1_bound) << ','
        << format_double(r.mc_phi_stderr) << ',' << format_double(r.mc_binary_stderr) << ','
        << format_double(r.bayes_stderr) << ',' << format_double(r.r_phi_star) << ','
        << format_double(r.r_phi_star_stderr) << ',' << format_double(r.r_phi_star_ball) << ','
        << format_double(r.ref_emp_phi_risk) << ',' << format_double(r.ref_gap) << ',' << sanitize(r.family)
        << ',' << r.cell << ',' << r.repetition << ',' << format_double(r.bandwidth) << ','
        << sanitize(r.error) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  if (s.empty()) return kNaN;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw InvalidArgument("not a number in sweep CSV: " + s);
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc()) throw InvalidArgument("not an integer in sweep CSV: " + s);
  return v;
}

}  // namespace

std::vector<RiskReport> read_sweep_csv(std::istream& in) {
  std::vector<RiskReport> rows;
  std::string line;
  std::map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (index.empty()) {
      for (std::size_t i = 0; i < fields.size(); ++i) index[fields[i]] = i;
      for (const auto& c : sweep_csv_columns()) {
        if (!index.count(c)) throw InvalidArgument("sweep CSV is missing column " + c);
      }
      continue;
    }
    auto get = [&](const char* name) -> const std::string& {
      const auto i = index.at(name);
      if (i >= fields.size()) throw InvalidArgument("short row in sweep CSV");
      return fields[i];
    };
    RiskReport r;
    r.gamma = parse_double(get("gamma"));
    r.k = parse_u64(get("k"));
    r.n = parse_u64(get("n"));
    r.seed = parse_u64(get("seed"));
    r.emp_phi_risk = parse_double(get("emp_phi_risk"));
    r.mc_phi_risk = parse_double(get("mc_phi_risk"));
    r.mc_binary_risk = parse_double(get("mc_binary_risk"));
    r.bayes_risk = parse_double(get("bayes_risk"));
    r.excess_phi = parse_double(get("excess_phi"));
    r.excess_binary = parse_double(get("excess_binary"));
    r.thm4_bound = parse_double(get("thm4_bound"));
    r.lemma1_bound = parse_double(get("lemma1_bound"));
    r.mc_phi_stderr = parse_double(get("mc_phi_stderr"));
    r.mc_binary_stderr = parse_double(get("mc_binary_stderr"));
    r.bayes_stderr = parse_double(get("bayes_stderr"));
    r.r_phi_star = parse_double(get("r_phi_star"));
    r.r_phi_star_stderr = parse_double(get("r_phi_star_stderr"));
    r.r_phi_star_ball = parse_double(get("r_phi_star_ball"));
    r.ref_emp_phi_risk = parse_double(get("ref_emp_phi_risk"));
    r.ref_gap = parse_double(get("ref_gap"));
    r.family = get("family");
    r.cell = parse_u64(get("cell"));
    r.repetition = parse_u64(get("repetition"));
    r.bandwidth = parse_double(get("bandwidth"));
    r.error = get("error");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace smoothrisk
