// smoothrisk command line: psi, calibrate, train, sweep, rates, verify.
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smoothrisk/calibration.hpp"
#include "smoothrisk/error.hpp"
#include "smoothrisk/io.hpp"
#include "smoothrisk/losses.hpp"
#include "smoothrisk/parallel_kernels.hpp"
#include "smoothrisk/rates.hpp"
#include "smoothrisk/rkhs_solver.hpp"
#include "smoothrisk/sweep.hpp"
#include "smoothrisk/synthetic.hpp"
#include "smoothrisk/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace smoothrisk;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  int threads = 0;
};

json load_config(const Common& common, const std::string& section) {
  if (common.config_path.empty()) return json::object();
  std::ifstream in(common.config_path);
  if (!in) throw InvalidArgument("cannot open config " + common.config_path);
  json j = json::parse(in, nullptr, true, true);
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  // A section named after the subcommand takes precedence over top-level keys.
  if (j.contains(section) && j[section].is_object()) {
    json merged = j;
    merged.merge_patch(j[section]);
    return merged;
  }
  return j;
}

std::ofstream open_out(const Common& common, const std::string& name, fs::path* path_out = nullptr) {
  fs::create_directories(common.out_dir);
  const fs::path path = fs::path(common.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  if (path_out) *path_out = path;
  return out;
}

std::string gamma_tag(double gamma) {
  std::string s = format_double(gamma);
  for (char& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

// ---------------------------------------------------------------- psi

struct PsiArgs {
  std::string loss;
  std::vector<double> gammas;
  std::size_t grid = 0;
  bool closed_form = false;
};

int run_psi(const Common& common, PsiArgs args) {
  const json cfg = load_config(common, "psi");
  if (args.loss.empty()) args.loss = cfg.value("loss", std::string("smoothed_hinge"));
  if (args.gammas.empty()) args.gammas = cfg.value("gammas", std::vector<double>{1.0});
  if (args.grid == 0) args.grid = cfg.value("grid_size", std::size_t{1001});
  args.closed_form = args.closed_form || cfg.value("closed_form", false);

  const bool gamma_matters = args.loss == "smoothed_hinge";
  const std::vector<double> gammas = gamma_matters ? args.gammas : std::vector<double>{1.0};
  for (double gamma : gammas) {
    const MarginLoss loss = MarginLoss::by_name(args.loss, gamma);
    const PsiTransform psi = (args.closed_form && gamma_matters) ? PsiTransform::closed_form(gamma, args.grid)
                                                                 : psi_numeric(loss, args.grid);
    const std::string name =
        gamma_matters ? "psi_" + args.loss + "_gamma" + gamma_tag(gamma) + ".csv" : "psi_" + args.loss + ".csv";
    fs::path path;
    auto out = open_out(common, name, &path);
    write_psi_csv(out, psi);
    std::cout << path.string() << '\n';
  }
  return 0;
}

// ---------------------------------------------------------- calibrate

int run_calibrate(const Common& common, std::string loss_name, std::optional<double> gamma_flag) {
  const json cfg = load_config(common, "calibrate");
  if (loss_name.empty()) loss_name = cfg.value("loss", std::string("smoothed_hinge"));
  const double gamma = gamma_flag.value_or(cfg.value("gamma", 1.0));
  const MarginLoss loss = MarginLoss::by_name(loss_name, gamma);
  const auto cert = is_calibrated(loss);
  json j = to_json(cert, loss_name);
  if (loss_name == "smoothed_hinge") j["gamma"] = gamma;
  fs::path path;
  auto out = open_out(common, "calibration_" + loss_name + ".json", &path);
  out << j.dump(2) << '\n';
  std::cout << loss_name << (cert.calibrated ? " calibrated" : " NOT calibrated") << " (phi'(0) = "
            << format_double(cert.deriv_at_zero) << ", min gap = " << format_double(cert.min_gap) << ")\n"
            << path.string() << '\n';
  return 0;
}

// -------------------------------------------------------------- train

struct TrainArgs {
  std::string data;
  std::optional<std::size_t> n;
  std::optional<std::size_t> k;
  std::optional<double> bound;
  std::optional<double> gamma;
};

int run_train(const Common& common, const TrainArgs& args) {
  const json cfg = load_config(common, "train");
  const KernelSpec kernel = cfg.contains("kernel") ? kernel_from_json(cfg["kernel"]) : KernelSpec::rbf();
  const double bound = args.bound.value_or(cfg.value("B", 3.0));
  const double gamma = args.gamma.value_or(cfg.value("gamma", 4.0));
  const std::size_t k = args.k.value_or(cfg.value("k", std::size_t{100}));

  Dataset data;
  const std::string data_path = args.data.empty() ? cfg.value("data", std::string()) : args.data;
  if (!data_path.empty()) {
    std::ifstream in(data_path);
    if (!in) throw InvalidArgument("cannot open data file " + data_path);
    data = read_dataset_csv(in);
  } else {
    SyntheticSpec spec = cfg.contains("spec") ? synthetic_spec_from_json(cfg["spec"]) : SyntheticSpec{};
    if (common.seed) spec.seed = *common.seed;
    data = generate(spec, args.n.value_or(cfg.value("n", std::size_t{200})));
  }

  const auto result = train_agd(data, kernel, bound, gamma, k);
  SavedModel saved{result.model, gamma, result.state.trace};
  {
    auto out = open_out(common, "model.json");
    out << to_json(saved).dump(2) << '\n';
  }
  {
    auto out = open_out(common, "trace.csv");
    write_trace_csv(out, result.state.trace);
  }
  std::cout << "n=" << data.size() << " k=" << k << " gamma=" << format_double(gamma)
            << " empirical_risk=" << format_double(result.state.trace.back().empirical_risk) << '\n';
  return 0;
}

// -------------------------------------------------------------- sweep

int run_sweep_cmd(const Common& common, bool no_timestamp) {
  const json cfg = load_config(common, "sweep");
  SweepConfig config = sweep_config_from_json(cfg);
  if (common.seed) config.master_seed = *common.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_sweep(config);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::path path;
  auto out = open_out(common, "sweep.csv", &path);
  write_sweep_csv(out, rows, !no_timestamp);
  std::size_t errors = 0;
  for (const auto& r : rows) errors += r.error.empty() ? 0 : 1;
  std::cout << rows.size() << " rows (" << errors << " errors) in " << format_double(secs) << " s\n"
            << path.string() << '\n';
  return 0;
}

// -------------------------------------------------------------- rates

int run_rates(const Common& common) {
  const json cfg = load_config(common, "rates");
  const RatesConfig config = rates_config_from_json(cfg);
  fs::path path;
  auto out = open_out(common, "rates.csv", &path);
  write_rates_csv(out, config);
  std::cout << path.string() << '\n';
  return 0;
}

// ------------------------------------------------------------- verify

int run_verify(const Common& common, std::string input, std::optional<double> sigmas) {
  const json cfg = load_config(common, "verify");
  if (input.empty()) input = cfg.value("input", (fs::path(common.out_dir) / "sweep.csv").string());
  std::ifstream in(input);
  if (!in) throw InvalidArgument("cannot open sweep CSV " + input);
  const auto rows = read_sweep_csv(in);
  VerifyOptions options;
  options.sigmas = sigmas.value_or(cfg.value("sigmas", options.sigmas));
  const auto summary = verify_report(rows, options);
  fs::path path;
  auto out = open_out(common, "verify.json", &path);
  out << summary.to_json().dump(2) << '\n';
  std::cout << "checked " << summary.checked << " rows: psi-transform violations " << summary.thm1_violations
            << ", translation-bound violations " << summary.thm4_violations << ", optimization-bound violations "
            << summary.lemma1_violations << '\n'
            << path.string() << '\n';
  return summary.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smoothed hinge loss: calibration, kernel solver and risk experiments"};
  app.require_subcommand(1);
  Common common;
  app.add_option("-c,--config", common.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", common.seed, "Master seed (overrides config)");
  app.add_option("--out-dir", common.out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", common.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  PsiArgs psi_args;
  auto* psi = app.add_subcommand("psi", "Tabulate the psi-transform of a loss");
  psi->fallthrough();
  psi->add_option("--loss", psi_args.loss, "smoothed_hinge, hinge, exponential, logit, truncated_quadratic");
  psi->add_option("--gamma", psi_args.gammas, "Smoothing parameter(s)");
  psi->add_option("--grid", psi_args.grid, "Number of grid points on [0, 1]");
  psi->add_flag("--closed-form", psi_args.closed_form, "Use the closed form (smoothed hinge only)");

  std::string cal_loss;
  std::optional<double> cal_gamma;
  auto* cal = app.add_subcommand("calibrate", "Classification-calibration certificate for a loss");
  cal->fallthrough();
  cal->add_option("--loss", cal_loss, "Loss name (also: constant)");
  cal->add_option("--gamma", cal_gamma, "Smoothing parameter");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Single accelerated solve; writes model.json and trace.csv");
  train->fallthrough();
  train->add_option("--data", train_args.data, "Dataset CSV (x0..,label[,eta]); default: synthetic from config");
  train->add_option("--n", train_args.n, "Synthetic sample size");
  train->add_option("-k,--iterations", train_args.k, "Iterations");
  train->add_option("-B,--bound", train_args.bound, "RKHS ball radius");
  train->add_option("--gamma", train_args.gamma, "Smoothing parameter");

  bool no_timestamp = false;
  auto* sweep = app.add_subcommand("sweep", "Grid run over (gamma, k, n, repetition); writes sweep.csv");
  sweep->fallthrough();
  sweep->add_flag("--no-timestamp", no_timestamp, "Omit the generated= comment line");

  auto* rates = app.add_subcommand("rates", "Rate-calculus table; writes rates.csv");
  rates->fallthrough();

  std::string verify_input;
  std::optional<double> verify_sigmas;
  auto* verify = app.add_subcommand("verify", "Check the risk inequalities on a sweep CSV; writes verify.json");
  verify->fallthrough();
  verify->add_option("--input", verify_input, "Sweep CSV (default: <out-dir>/sweep.csv)");
  verify->add_option("--sigmas", verify_sigmas, "Slack in combined standard errors");

  CLI11_PARSE(app, argc, argv);

  try {
    if (common.threads > 0) set_thread_count(common.threads);
    if (*psi) return run_psi(common, psi_args);
    if (*cal) return run_calibrate(common, cal_loss, cal_gamma);
    if (*train) return run_train(common, train_args);
    if (*sweep) return run_sweep_cmd(common, no_timestamp);
    if (*rates) return run_rates(common);
    if (*verify) return run_verify(common, verify_input, verify_sigmas);
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << '\n' << e.diagnostics() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
