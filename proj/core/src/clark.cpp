#include "mif/clark.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "mif/errors.hpp"
#include "mif/roots.hpp"

namespace mif {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxTailDoublings = 60;

std::vector<double> reciprocal_scaled(std::span<const double> xs, const char* what) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !std::isfinite(xs[i])) {
      throw DomainError(std::string(what) + " at position " + std::to_string(i) +
                        " must be positive");
    }
    out.push_back(kTwoPi / xs[i]);
  }
  return out;
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

using RealFunction = std::function<double(double)>;

// Finds x0 just inside a pole so that f(x0) has a definite sign. `direction`
// is +1 to step right of the pole, -1 to step left.
bool probe_near_pole(const RealFunction& f, double pole, int direction, double scale, double& x,
                     double& fx) {
  for (const double eps : {1e-6, 1e-9, 1e-12}) {
    x = pole + direction * eps * scale;
    if (x == pole) continue;
    fx = f(x);
    if (std::isfinite(fx) && fx != 0.0) return true;
  }
  return false;
}

struct TailLimits {
  int left;   // sign of lim_{x -> -inf} m(x)
  int right;  // sign of lim_{x -> +inf} m(x)
};

std::vector<double> zeros_between_poles(std::span<const double> poles, const RealFunction& f,
                                        TailLimits limits) {
  std::vector<double> zeros;
  if (poles.empty()) return zeros;

  for (std::size_t i = 0; i + 1 < poles.size(); ++i) {
    const double lo = poles[i];
    const double hi = poles[i + 1];
    const double width = hi - lo;
    bool found = false;
    for (const double eps : {1e-6, 1e-9, 1e-12}) {
      const double x0 = lo + eps * width;
      const double x1 = hi - eps * width;
      const double f0 = f(x0);
      const double f1 = f(x1);
      if (sign_of(f0) * sign_of(f1) < 0) {
        zeros.push_back(refine_root(f, x0, x1, f0, f1));
        found = true;
        break;
      }
    }
    if (!found) {
      throw NumericalFailure("second_spectrum: no sign change in gap " + std::to_string(i) + " (" +
                             std::to_string(lo) + ", " + std::to_string(hi) + ")");
    }
  }

  const double typical_gap =
      poles.size() > 1 ? (poles.back() - poles.front()) / static_cast<double>(poles.size() - 1)
                       : std::max(1.0, std::abs(poles.front()));

  auto search_tail = [&](double pole, int direction, int limit_sign) {
    double x0 = 0.0, f0 = 0.0;
    if (limit_sign == 0) return;
    if (!probe_near_pole(f, pole, direction, typical_gap, x0, f0)) {
      throw NumericalFailure("second_spectrum: cannot evaluate next to pole " +
                             std::to_string(pole));
    }
    if (sign_of(f0) == limit_sign) return;  // no sign change toward infinity
    double reach = typical_gap;
    for (int k = 0; k <= kMaxTailDoublings; ++k, reach *= 2.0) {
      const double x1 = pole + direction * reach;
      const double f1 = f(x1);
      if (sign_of(f1) * sign_of(f0) <= 0) {
        const double lo = std::min(x0, x1);
        const double hi = std::max(x0, x1);
        zeros.push_back(refine_root(f, lo, hi, direction > 0 ? f0 : f1, direction > 0 ? f1 : f0));
        return;
      }
    }
    throw NumericalFailure("second_spectrum: no zero found beyond pole " + std::to_string(pole) +
                           " after " + std::to_string(kMaxTailDoublings) + " doublings");
  };

  search_tail(poles.back(), +1, limits.right);
  search_tail(poles.front(), -1, limits.left);
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

}  // namespace

std::vector<double> masses_from_derivatives(std::span<const double> derivative_moduli) {
  return reciprocal_scaled(derivative_moduli, "|Theta'|");
}

std::vector<double> derivatives_from_masses(std::span<const double> masses) {
  return reciprocal_scaled(masses, "mass");
}

std::vector<double> second_spectrum(const PoleExpansionForm& form) {
  const int limit = sign_of(form.limit());
  return zeros_between_poles(
      form.poles(), [&](double x) { return eval_pole_expansion(form, x).real(); }, {limit, limit});
}

std::vector<double> second_spectrum(const HerglotzProductForm& form) {
  const int limit = sign_of(limit_at_infinity(form).limit);
  return zeros_between_poles(
      form.pairs().poles(), [&](double x) { return eval_product(form, x).real(); },
      {limit, limit});
}

std::vector<double> second_spectrum(const HerglotzSumForm& form) {
  TailLimits limits{};
  if (form.slope_at_infinity() > 0.0) {
    limits = {-1, +1};
  } else {
    const int limit = sign_of(sum_to_expansion(form).limit());
    limits = {limit, limit};
  }
  return zeros_between_poles(
      form.measure().support(), [&](double x) { return eval_sum(form, x).real(); }, limits);
}

std::vector<double> second_spectrum(const HerglotzForm& form) {
  return std::visit([](const auto& f) { return second_spectrum(f); }, form);
}

namespace detail {

void check_probe_heights(std::span<const double> probe_heights) {
  if (probe_heights.size() < 3) {
    throw DomainError("mass_at_infinity needs at least three probe heights");
  }
  for (std::size_t i = 0; i < probe_heights.size(); ++i) {
    if (!(probe_heights[i] > 0.0) || !std::isfinite(probe_heights[i])) {
      throw DomainError("probe heights must be positive and finite");
    }
    if (i > 0 && !(probe_heights[i - 1] < probe_heights[i])) {
      throw DomainError("probe heights must be strictly increasing");
    }
  }
}

double extrapolate_slope(std::span<const double> heights, std::span<const double> slopes) {
  // Neville's scheme in h = 1/y, evaluated at h = 0.
  const std::size_t n = heights.size();
  std::vector<double> h(n);
  std::vector<double> p(slopes.begin(), slopes.end());
  for (std::size_t i = 0; i < n; ++i) h[i] = 1.0 / heights[i];
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double hi = h[i];
      const double hj = h[i + level];
      p[i] = (hj * p[i] - hi * p[i + 1]) / (hj - hi);
    }
  }
  return std::numbers::pi * std::max(0.0, p[0]);
}

}  // namespace detail

double mass_at_infinity(const HerglotzForm& form, std::span<const double> probe_heights) {
  detail::check_probe_heights(probe_heights);
  if (const auto* sum = std::get_if<HerglotzSumForm>(&form)) {
    return sum->measure().mass_at_infinity();
  }
  return mass_at_infinity_of([&](complex z) { return evaluate(form, z); }, probe_heights);
}

}  // namespace mif
