#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "smoothrisk/error.hpp"
#include "smoothrisk/losses.hpp"

using namespace smoothrisk;

namespace {
const std::vector<double> kGammas{0.5, 1, 2, 5, 10, 50};

std::vector<double> z_grid() {
  std::vector<double> z;
  for (int i = -1000; i <= 1000; ++i) z.push_back(i * 0.01);
  return z;
}
}  // namespace

TEST_CASE("smoothed hinge values") {
  CHECK(smoothed_hinge_value(1.0, 2.0) == doctest::Approx(std::log(2.0) / 2).epsilon(1e-15));
  CHECK(smoothed_hinge_value(0.0, 1.0) == doctest::Approx(1.3132616875182228).epsilon(1e-15));
  CHECK(std::abs(smoothed_hinge_value(-0.5, 1000.0) - 1.5) <= 1e-3);
  // huge gamma and margins stay finite
  CHECK(std::isfinite(smoothed_hinge_value(-1e6, 1e4)));
  CHECK(smoothed_hinge_value(-1e6, 1e4) == doctest::Approx(1e6 + 1));
  CHECK(smoothed_hinge_value(1e6, 1e4) >= 0.0);
}

TEST_CASE("smoothed hinge agrees with the long-double oracle") {
  for (double g : {0.5, 1.0, 5.0, 50.0, 1000.0, 1e4}) {
    for (double z : {-10.0, -1.0, 0.0, 0.3, 0.999, 1.0, 1.001, 2.0, 10.0}) {
      if (g * (1 - z) > 11000) continue;  // beyond long double exp
      const double expect = static_cast<double>(oracle::phi(z, g));
      CHECK(smoothed_hinge_value(z, g) == doctest::Approx(expect).epsilon(1e-13));
    }
  }
}

TEST_CASE("smoothed hinge derivatives") {
  CHECK(smoothed_hinge_deriv(1.0, 5.0) == -0.5);
  CHECK(smoothed_hinge_deriv(0.0, 1.0) == doctest::Approx(-std::exp(1.0) / (1 + std::exp(1.0))).epsilon(1e-15));
  CHECK(std::abs(smoothed_hinge_deriv(100.0, 1.0)) <= 1e-30);
  CHECK(smoothed_hinge_deriv(100.0, 1.0) < 0.0);
  CHECK(smoothed_hinge_second_deriv(1.0, 8.0) == 2.0);
  CHECK(smoothed_hinge_second_deriv(0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) / std::pow(1 + std::exp(1.0), 2)).epsilon(1e-14));
  CHECK(smoothed_hinge_second_deriv(-50.0, 1.0) < 1e-20);

  // central finite differences
  const double fd1 = oracle::central_diff([](double z) { return smoothed_hinge_value(z, 1.0); }, 0.0, 1e-6);
  CHECK(std::abs(fd1 - smoothed_hinge_deriv(0.0, 1.0)) <= 1e-6 * std::abs(fd1));
  const double fd2 = oracle::central_diff([](double z) { return smoothed_hinge_deriv(z, 1.0); }, 0.0, 1e-6);
  CHECK(fd2 == doctest::Approx(smoothed_hinge_second_deriv(0.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("variational maximizer") {
  CHECK(variational_maximizer(1.0, 3.0) == 0.5);
  CHECK(variational_maximizer(0.0, 1.0) ==
        doctest::Approx(static_cast<double>(oracle::variational_argmax(0.0, 1.0))).epsilon(1e-8));
  CHECK(variational_maximizer(-3.0, 2.0) ==
        doctest::Approx(static_cast<double>(oracle::variational_argmax(-3.0, 2.0))).epsilon(1e-8));
  CHECK(variational_maximizer(-3.0, 2.0) == doctest::Approx(0.999665).epsilon(1e-6));
}

TEST_CASE("binary entropy endpoints") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(variational_objective(1.5, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("reference losses") {
  CHECK(reference_loss_value(ReferenceKind::hinge, 0.5) == 0.5);
  CHECK(reference_loss_value(ReferenceKind::exponential, 0.0) == 1.0);
  CHECK(reference_loss_value(ReferenceKind::truncated_quadratic, -1.0) == 4.0);
  CHECK(reference_loss_value(ReferenceKind::logit, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(reference_loss_value(ReferenceKind::hinge, 3.0) == 0.0);
  CHECK_THROWS_AS(parse_reference_kind("squared"), InvalidArgument);
  for (auto kind : {ReferenceKind::hinge, ReferenceKind::exponential, ReferenceKind::logit,
                    ReferenceKind::truncated_quadratic}) {
    CHECK(parse_reference_kind(to_string(kind)) == kind);
    // differentiable at 0 with a negative slope
    const double fd = oracle::central_diff([&](double z) { return reference_loss_value(kind, z); }, 0.0, 1e-6);
    CHECK(fd == doctest::Approx(reference_loss_deriv(kind, 0.0)).epsilon(1e-6));
    CHECK(reference_loss_deriv(kind, 0.0) < 0.0);
  }
}

TEST_CASE("argument checks") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(smoothed_hinge_value(nan, 1.0), InvalidArgument);
  CHECK_THROWS_AS(smoothed_hinge_value(0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(smoothed_hinge_deriv(0.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(smoothed_hinge_second_deriv(std::numeric_limits<double>::infinity(), 1.0), InvalidArgument);
  CHECK_THROWS_AS(SmoothLoss(0.0), InvalidArgument);
  CHECK_THROWS_AS(MarginLoss::by_name("nope"), InvalidArgument);
}

TEST_CASE("property: sandwich between hinge and hinge + log2/gamma") {
  for (double g : kGammas) {
    for (double z : z_grid()) {
      const double hinge = std::max(0.0, 1.0 - z);
      const double v = smoothed_hinge_value(z, g);
      CHECK(v >= hinge);
      CHECK(v <= hinge + std::log(2.0) / g + 1e-15);
      CHECK(v > 0.0);
    }
  }
}

TEST_CASE("property: variational identity, derivative bounds, convexity") {
  for (double g : kGammas) {
    const auto grid = z_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double z = grid[i];
      const double a = variational_maximizer(z, g);
      CHECK(std::abs(variational_objective(a, z, g) - smoothed_hinge_value(z, g)) <= 1e-8);
      const double d1 = smoothed_hinge_deriv(z, g);
      const double d2 = smoothed_hinge_second_deriv(z, g);
      CHECK(std::abs(d1) <= 1.0);
      CHECK(d1 < 0.0);
      CHECK(d2 >= 0.0);
      CHECK(d2 <= g / 4);
      const double h = 1e-5;
      const double fd1 = oracle::central_diff([&](double t) { return smoothed_hinge_value(t, g); }, z, h);
      const double fd2 = oracle::central_diff([&](double t) { return smoothed_hinge_deriv(t, g); }, z, h);
      CHECK(std::abs(fd1 - d1) <= 1e-5);
      CHECK(std::abs(fd2 - d2) <= 1e-5);
      if (i > 0 && i + 1 < grid.size()) {
        const double mid = smoothed_hinge_value(z, g);
        const double avg = 0.5 * (smoothed_hinge_value(grid[i - 1], g) + smoothed_hinge_value(grid[i + 1], g));
        CHECK(mid <= avg + 1e-14);
      }
    }
  }
}

TEST_CASE("property: value is nonincreasing in z") {
  for (double g : kGammas) {
    double prev = smoothed_hinge_value(-10.0, g);
    for (double z : z_grid()) {
      const double v = smoothed_hinge_value(z, g);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("margin loss wrappers") {
  const auto sh = MarginLoss::smoothed_hinge(2.0);
  CHECK(sh.value(0.3) == smoothed_hinge_value(0.3, 2.0));
  CHECK(sh.deriv(0.3) == smoothed_hinge_deriv(0.3, 2.0));
  CHECK(sh.scale() == 2.0);
  const auto c = MarginLoss::constant(1.0);
  CHECK(c.value(-5.0) == 1.0);
  CHECK(c.deriv(2.0) == 0.0);
  CHECK(MarginLoss::by_name("exponential").value(0.0) == 1.0);
  SmoothLoss loss(4.0);
  CHECK(loss.value(1.0) == doctest::Approx(std::log(2.0) / 4));
  CHECK(loss.maximizer(1.0) == 0.5);
}
