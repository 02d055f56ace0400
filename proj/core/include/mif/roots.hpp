#pragma once

#include <functional>

namespace mif {

/// Bracketing root refinement on a real interval with a sign change.
struct RootOptions {
  /// Bisect until the bracket is narrower than this (relative to max(1, |x|)).
  double bisection_width = 1e-9;
  /// Secant steps taken after bisection; a step leaving the bracket falls back
  /// to the midpoint.
  int secant_steps = 3;
  /// Final relative tolerance; extra bisection is spent if the secant phase
  /// did not reach it.
  double relative_tolerance = 1e-12;
};

/// Refines a root of `f` inside [lo, hi]. Requires f(lo) and f(hi) of
/// opposite sign (or one of them zero). Throws NumericalFailure otherwise.
double refine_root(const std::function<double(double)>& f, double lo, double hi,
                   const RootOptions& options = {});

/// Same, with the endpoint values already known.
double refine_root(const std::function<double(double)>& f, double lo, double hi,
                   double f_lo, double f_hi, const RootOptions& options = {});

}  // namespace mif
