#include <doctest.h>

#include <cmath>
#include <sstream>

#include "smoothrisk/calibration.hpp"
#include "smoothrisk/error.hpp"
#include "smoothrisk/parallel_kernels.hpp"
#include "smoothrisk/sweep.hpp"
#include "smoothrisk/verify.hpp"

using namespace smoothrisk;

namespace {

SweepConfig small_config() {
  SweepConfig c;
  c.spec = SyntheticSpec::noisy_halfspace(0.1, 2);
  c.gammas = {2.0};
  c.ks = {30};
  c.ns = {80};
  c.repetitions = 1;
  c.mc_samples = 5000;
  c.master_seed = 17;
  c.reference.max_iterations = 3000;
  return c;
}

std::string csv(const std::vector<RiskReport>& rows) {
  std::ostringstream out;
  write_sweep_csv(out, rows, false);
  return out.str();
}

RiskReport hand_row(double gamma, double excess_phi, double excess_binary) {
  RiskReport r;
  r.gamma = gamma;
  r.excess_phi = excess_phi;
  r.excess_binary = excess_binary;
  r.mc_phi_stderr = r.mc_binary_stderr = 1e-4;
  r.ref_emp_phi_risk = std::nan("");
  r.emp_phi_risk = std::nan("");
  return r;
}

}  // namespace

TEST_CASE("single-cell sweep fills every column") {
  const auto rows = run_sweep(small_config());
  REQUIRE(rows.size() == 1);
  const auto& r = rows[0];
  CHECK(r.error.empty());
  CHECK(r.family == "noisy_halfspace");
  CHECK(r.bayes_risk == 0.1);
  CHECK(r.excess_binary == doctest::Approx(r.mc_binary_risk - r.bayes_risk));
  CHECK(r.excess_phi == doctest::Approx(r.mc_phi_risk - r.r_phi_star));
  CHECK(r.lemma1_bound == doctest::Approx(2.0 * 9.0 / (32.0 * 32.0)));
  CHECK(r.thm4_bound == doctest::Approx(binary_excess_bound(r.excess_phi, 2.0)));
  CHECK(std::isfinite(r.ref_emp_phi_risk));
  CHECK(r.ref_emp_phi_risk <= r.emp_phi_risk + 1e-10);
  CHECK(std::isnan(r.r_phi_star_ball));
  CHECK(r.bandwidth > 0.0);
  CHECK(r.excess_binary >= -3 * r.mc_binary_stderr);
  for (double v : {r.emp_phi_risk, r.mc_phi_risk, r.mc_binary_risk, r.bayes_risk}) CHECK(v >= 0.0);

  std::istringstream in(csv(rows));
  std::string first;
  std::getline(in, first);
  CHECK(first == "# schema_version=1");
}

TEST_CASE("lemma1 bound grows with gamma across a grid") {
  SweepConfig c = small_config();
  c.spec = SyntheticSpec::margin_blobs(0.5, 2);
  c.gammas = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  c.lemma1_reference = false;
  const auto rows = run_sweep(c);
  REQUIRE(rows.size() == 9);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].lemma1_bound > rows[i - 1].lemma1_bound);
  const auto summary = verify_report(rows);
  CHECK(summary.checked == 9);
  CHECK(summary.lemma1_checked == 0);
  CHECK(summary.all_pass());
}

TEST_CASE("sweep output is deterministic and independent of thread count") {
  SweepConfig c = small_config();
  c.gammas = {1.0, 8.0};
  c.ks = {10, 40};
  c.ns = {50, 70};
  c.repetitions = 2;
  set_thread_count(1);
  const std::string a = csv(run_sweep(c));
  set_thread_count(3);
  const std::string b = csv(run_sweep(c));
  set_thread_count(0);
  CHECK(a == b);
  c.master_seed = 18;
  CHECK(csv(run_sweep(c)) != a);
}

TEST_CASE("rows are ordered by cell then repetition") {
  SweepConfig c = small_config();
  c.gammas = {1.0, 2.0};
  c.ks = {5, 10};
  c.ns = {40, 60};
  c.repetitions = 2;
  c.lemma1_reference = false;
  const auto rows = run_sweep(c);
  REQUIRE(rows.size() == 16);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].cell == i / 2);
    CHECK(rows[i].repetition == i % 2);
  }
}

TEST_CASE("failing cells are recorded and the sweep continues") {
  SweepConfig c = small_config();
  c.kernel = KernelSpec::polynomial(600, 10.0);  // overflows to inf
  c.lemma1_reference = false;
  const auto rows = run_sweep(c);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].error.empty());
  CHECK(std::isnan(rows[0].excess_phi));
  const auto summary = verify_report(rows);
  CHECK(summary.skipped == 1);
  CHECK(summary.checked == 0);
}

TEST_CASE("CSV round trip") {
  SweepConfig c = small_config();
  c.gammas = {1.0, 4.0};
  const auto rows = run_sweep(c);
  const std::string text = csv(rows);
  std::istringstream in(text);
  const auto back = read_sweep_csv(in);
  REQUIRE(back.size() == rows.size());
  CHECK(csv(back) == text);
}

TEST_CASE("config validation") {
  SweepConfig c = small_config();
  c.gammas = {};
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
  c = small_config();
  c.mc_samples = 10;
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
  c = small_config();
  c.bound = 0;
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
}

TEST_CASE("verification on hand-built rows") {
  CHECK_THROWS_AS(verify_report({}), InvalidArgument);

  // perfect classifier
  auto perfect = hand_row(4.0, 0.3, 0.0);
  CHECK(verify_report({perfect}).all_pass());

  // consistent row, then the same row with the binary excess inflated tenfold
  auto good = hand_row(16.0, 0.02, 0.015);
  const auto ok = verify_report({good});
  CHECK(ok.all_pass());
  auto corrupted = good;
  corrupted.excess_binary *= 10;
  const auto bad = verify_report({good, corrupted});
  CHECK_FALSE(bad.all_pass());
  CHECK(bad.thm4_violations == 1);
  CHECK(bad.rows[1].thm4_margin < 0.0);
  CHECK(bad.worst_thm4_margin == bad.rows[1].thm4_margin);

  // psi-transform check: E = 0.5 needs E_phi >= psi(0.5)
  auto psi_bad = hand_row(50.0, 0.1, 0.5);
  const auto s = verify_report({psi_bad});
  CHECK(s.thm1_violations == 1);
  const double slack = 3 * std::sqrt(2e-8);
  CHECK(s.rows[0].thm1_margin ==
        doctest::Approx(0.1 + slack - psi_smoothed_hinge_closed(0.5 - slack, 50.0).value).epsilon(1e-12));

  // optimization check
  auto opt = hand_row(4.0, 0.3, 0.0);
  opt.emp_phi_risk = 0.5;
  opt.ref_emp_phi_risk = 0.4;
  opt.lemma1_bound = 0.05;
  const auto o = verify_report({opt});
  CHECK(o.lemma1_checked == 1);
  CHECK(o.lemma1_violations == 1);

  const auto j = bad.to_json();
  CHECK(j["translation_bound"]["violations"] == 1);
  CHECK(j["all_pass"] == false);
  CHECK(j["rows"].size() == 2);
}
