#include "smoothrisk/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smoothrisk/error.hpp"

namespace smoothrisk {
namespace {

double checked(const std::function<double(double)>& f, double x, int& evals) {
  ++evals;
  const double v = f(x);
  if (!std::isfinite(v)) {
    std::ostringstream diag;
    diag << "f(" << x << ") = " << v << " after " << evals << " evaluations";
    throw NumericFailure("non-finite objective during 1-D minimization", diag.str());
  }
  return v;
}

}  // namespace

Minimum1D minimize_convex_1d(const std::function<double(double)>& f,
                             const std::function<double(double)>& df,
                             const BracketOptions& options) {
  if (!(options.cap > 0.0) || !(options.tolerance > 0.0) || !(options.initial_half_width > 0.0)) {
    throw InvalidArgument("bracket options must be positive");
  }
  const double lo_limit = std::max(options.domain_lo, -options.cap);
  const double hi_limit = std::min(options.domain_hi, options.cap);
  if (lo_limit > hi_limit) throw InvalidArgument("empty search domain");

  double a = std::clamp(-options.initial_half_width, lo_limit, hi_limit);
  double b = std::clamp(options.initial_half_width, lo_limit, hi_limit);

  while (b < hi_limit && df(b) < 0.0) {
    b = std::min(hi_limit, b > 0.0 ? 2.0 * b : b + options.initial_half_width);
  }
  while (a > lo_limit && df(a) > 0.0) {
    a = std::max(lo_limit, a < 0.0 ? 2.0 * a : a - options.initial_half_width);
  }

  const bool right_cap = b == options.cap && df(b) < 0.0;
  const bool left_cap = a == -options.cap && df(a) > 0.0;

  Minimum1D out;
  int evals = 0;
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = checked(f, x1, evals);
  double f2 = checked(f, x2, evals);
  while (b - a > options.tolerance) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = checked(f, x1, evals);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = checked(f, x2, evals);
    }
    if (evals > 10000) {
      throw NumericFailure("golden-section search did not converge",
                           "bracket width " + std::to_string(b - a));
    }
  }
  out.argmin = 0.5 * (a + b);
  out.value = checked(f, out.argmin, evals);
  out.at_cap = right_cap || left_cap;
  out.evaluations = evals;
  return out;
}

}  // namespace smoothrisk
