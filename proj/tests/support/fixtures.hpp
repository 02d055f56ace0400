#pragma once

// Seeded random fixtures shared by unit, property and acceptance tests.

#include <random>
#include <set>
#include <vector>

#include "mif/canonical.hpp"
#include "mif/herglotz.hpp"

namespace mif::testing {

using Rng = std::mt19937_64;

struct ProductOptions {
  int min_pairs = 1;
  int max_pairs = 50;
  /// No pair may meet [-guard, guard].
  double guard = 0.1;
  Indexing indexing = Indexing::TwoSided;
  double min_step = 0.05;
  double max_step = 2.0;
};

/// Random interlacing product form with c > 0 and no pair straddling 0.
HerglotzProductForm random_product_form(Rng& rng, const ProductOptions& options = {});

/// Random complex point with imaginary part in [im_lo, im_hi].
complex random_upper(Rng& rng, double re_span, double im_lo, double im_hi);

/// Random PSD trace-normed cell R_t diag(l, 1 - l) R_t^T with l in [lo, hi].
canonical::Cell random_cell(Rng& rng, double lo = 0.0, double hi = 1.0);

/// Random piecewise-constant Hamiltonian with 1..max_cells cells of random
/// widths on [0, length].
canonical::Hamiltonian random_hamiltonian(Rng& rng, int max_cells, double length,
                                          double eig_lo = 0.1, double eig_hi = 0.9);

/// Angle in [0, pi) with |sin(angle - other)| >= separation for every other.
double random_angle(Rng& rng, const std::vector<double>& others = {}, double separation = 0.2);

/// The H = I/2 fixture on [0, length].
canonical::Hamiltonian constant_fixture(double length);

/// Alternate indices among the `count` eigenvalues nearest 0.
std::set<int> central_alternate_indices(const std::vector<double>& spectrum, int first_index,
                                        std::size_t count);

}  // namespace mif::testing
