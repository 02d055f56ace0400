#pragma once

// Clark-measure data extracted from Herglotz forms: point masses and
// derivative values of the inner function, the second spectrum (zeros of m),
// and the point mass at infinity.

#include <span>
#include <vector>

#include "mif/herglotz.hpp"

namespace mif {

/// mu = 2 pi / |Theta'| elementwise. Throws DomainError on nonpositive input.
std::vector<double> masses_from_derivatives(std::span<const double> derivative_moduli);
/// |Theta'| = 2 pi / mu elementwise.
std::vector<double> derivatives_from_masses(std::span<const double> masses);

/// Zeros of m on the real line, one per gap between consecutive poles, plus
/// the zero beyond the outermost pole when the limit at infinity has the
/// right sign for one to exist. Sorted ascending; interlaces the poles.
///
/// Throws NumericalFailure naming the gap when no sign change is found.
std::vector<double> second_spectrum(const PoleExpansionForm& form);
std::vector<double> second_spectrum(const HerglotzProductForm& form);
std::vector<double> second_spectrum(const HerglotzSumForm& form);
std::vector<double> second_spectrum(const HerglotzForm& form);

/// pi * lim m(iy)/(iy). Sum forms return the stored value exactly; other forms
/// extrapolate m(iy)/(iy) in 1/y over the probe heights (at least three,
/// strictly increasing and positive).
double mass_at_infinity(const HerglotzForm& form, std::span<const double> probe_heights);

/// Extrapolated pi * lim m(iy)/(iy) for an arbitrary evaluator.
template <typename Evaluator>
double mass_at_infinity_of(Evaluator&& m, std::span<const double> probe_heights);

namespace detail {
double extrapolate_slope(std::span<const double> heights, std::span<const double> slopes);
void check_probe_heights(std::span<const double> probe_heights);
}  // namespace detail

template <typename Evaluator>
double mass_at_infinity_of(Evaluator&& m, std::span<const double> probe_heights) {
  detail::check_probe_heights(probe_heights);
  std::vector<double> slopes;
  slopes.reserve(probe_heights.size());
  for (const double y : probe_heights) {
    // Im m(iy) / y is the real part of m(iy)/(iy).
    slopes.push_back(std::imag(m(complex(0.0, y))) / y);
  }
  return detail::extrapolate_slope(probe_heights, slopes);
}

}  // namespace mif
