#pragma once

#include <functional>
#include <limits>

namespace smoothrisk {

struct Minimum1D {
  double argmin = 0.0;
  double value = 0.0;
  /// True when the minimizer sits on the expansion cap, i.e. the infimum is
  /// approached at infinity and `argmin` is only a bracket endpoint.
  bool at_cap = false;
  int evaluations = 0;
};

struct BracketOptions {
  double initial_half_width = 2.0;
  /// Bracket never grows past [-cap, cap].
  double cap = 1010.0;
  double tolerance = 1e-10;
  /// Search domain; use infinities for an unconstrained side.
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
};

/// Minimizes a convex function on the real line (or a closed half-line).
/// The bracket starts at [-w, w] intersected with the domain and doubles on
/// each side until the derivative signs show the minimizer is interior, then
/// a golden-section ternary search shrinks it to `tolerance`.
/// Throws NumericFailure when f returns a non-finite value.
Minimum1D minimize_convex_1d(const std::function<double(double)>& f,
                             const std::function<double(double)>& df,
                             const BracketOptions& options = {});

}  // namespace smoothrisk
