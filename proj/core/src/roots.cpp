#include "mif/roots.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mif/errors.hpp"

namespace mif {

namespace {

bool opposite_signs(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

double scale_of(double x) { return std::max(1.0, std::abs(x)); }

}  // namespace

double refine_root(const std::function<double(double)>& f, double lo, double hi,
                   const RootOptions& options) {
  return refine_root(f, lo, hi, f(lo), f(hi), options);
}

double refine_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                   double f_hi, const RootOptions& options) {
  if (!(lo < hi)) {
    throw NumericalFailure("refine_root: empty bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (!opposite_signs(f_lo, f_hi)) {
    throw NumericalFailure("refine_root: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }

  // Bisection phase. The iteration cap covers any double bracket.
  for (int it = 0; it < 200 && (hi - lo) > options.bisection_width * scale_of(0.5 * (lo + hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (opposite_signs(f_lo, f_mid)) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }

  // Secant phase, kept inside the bracket.
  double x_prev = lo, f_prev = f_lo;
  double x = hi, f_x = f_hi;
  double best = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  double best_abs = std::min(std::abs(f_lo), std::abs(f_hi));
  for (int step = 0; step < options.secant_steps; ++step) {
    double next = (f_x != f_prev) ? x - f_x * (x - x_prev) / (f_x - f_prev) : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double f_next = f(next);
    if (f_next == 0.0) return next;
    if (std::abs(f_next) < best_abs) {
      best_abs = std::abs(f_next);
      best = next;
    }
    if (opposite_signs(f_lo, f_next)) {
      hi = next;
      f_hi = f_next;
    } else {
      lo = next;
      f_lo = f_next;
    }
    const double moved = std::abs(next - x);
    x_prev = x;
    f_prev = f_x;
    x = next;
    f_x = f_next;
    if (moved <= options.relative_tolerance * scale_of(x)) return x;
  }

  // Fallback: the secant phase stalled, keep bisecting the bracket.
  for (int it = 0; it < 200 && (hi - lo) > options.relative_tolerance * scale_of(best); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (std::abs(f_mid) < best_abs) {
      best_abs = std::abs(f_mid);
      best = mid;
    }
    if (opposite_signs(f_lo, f_mid)) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

}  // namespace mif
