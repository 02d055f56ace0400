#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's evaluation code paths.

#include <functional>
#include <span>

#include "mif/canonical.hpp"

namespace mif::testing {

using canonical::Hamiltonian;
using canonical::Matrix2c;

/// c * prod (z/b - 1)/(z/a - 1), factors taken in storage order and
/// multiplied in long double.
complex direct_product(double c, std::span<const double> a, std::span<const double> b, complex z);

/// (1/(2 pi i)) \oint f over the circle |z - center| = radius, trapezoid rule.
complex contour_residue(const std::function<complex(complex)>& f, complex center, double radius,
                        int points = 64);

/// T(L, z) by classical RK4 on f' = z J H f with step <= max_step.
Matrix2c rk4_transfer(const Hamiltonian& h, complex z, double max_step = 1e-5);

/// int_0^L u^T H u dx for the real solution u(0) = (cos alpha, sin alpha),
/// integrated by RK4 with composite Simpson accumulation.
double quadrature_energy(const Hamiltonian& h, double alpha, double x, int steps_per_cell = 4000);

/// Plain bisection on a bracket with a sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200);

}  // namespace mif::testing
