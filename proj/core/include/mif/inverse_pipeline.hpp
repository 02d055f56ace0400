#pragma once

// Inverse spectral pipelines for canonical systems, carried out up to the
// m-function: spectral data -> Clark data -> reconstructed Herglotz function
// -> m_{alpha1,beta}, compared with the forward Weyl function on a grid.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "mif/canonical.hpp"
#include "mif/herglotz.hpp"

namespace mif::canonical {

/// Truncated inverse data for boundary (alpha1, beta).
///
/// Without alpha2 the problem is a spectral measure and every index needs a
/// norming constant. With alpha2, indices in `norming_constants` carry
/// gamma_{alpha1,beta} and the remaining ones carry the matching point of
/// sigma_{alpha2,beta} in `second_spectrum`.
struct InverseProblem {
  double alpha1 = 0.0;
  double beta = 0.0;
  std::optional<double> alpha2;
  int first_index = 0;
  std::vector<double> spectrum;
  std::map<int, double> norming_constants;
  std::map<int, double> second_spectrum;

  int last_index() const { return first_index + static_cast<int>(spectrum.size()) - 1; }
};

enum class PipelinePath { Measure, TwoSpectra, Mixed };

const char* path_name(PipelinePath path);

/// Window [lo, hi] holding exactly the `count` eigenvalues of (H, boundary)
/// nearest to 0, with both ends half-way to the next eigenvalue outside.
std::pair<double, double> window_for_count(const Hamiltonian& hamiltonian,
                                           const BoundaryPair& boundary, std::size_t count);

/// Full spectral measure of (H, boundary) on [lo, hi].
InverseProblem measure_problem(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                               double lo, double hi);

/// Two-boundary data on [lo, hi]: sigma_{alpha1,beta} in the window, norming
/// constants on the indices in `with_masses`, and for every other index n the
/// first point of sigma_{alpha2,beta} above a_n (searched past hi when needed).
InverseProblem two_boundary_problem(const Hamiltonian& hamiltonian,
                                    const GeneralizedBoundary& boundary, double lo, double hi,
                                    const std::set<int>& with_masses = {});

/// Extends two-boundary data by `pairs_per_side` extrapolated pairs beyond each
/// end of the window. The outer quarter of the window (at most 16 points)
/// fixes the spacing of the added poles, and the mean position of the known
/// second-spectrum points inside their gaps fixes the added zeros. Problems
/// without alpha2, with fewer than 4 poles or without any known second
/// spectrum point are returned unchanged.
InverseProblem complete_tail(const InverseProblem& problem, std::size_t pairs_per_side);

struct PipelineOptions {
  /// Pairs added per side by complete_tail, as a multiple of the window size,
  /// for recovering hidden second-spectrum points. 0 disables completion.
  std::size_t tail_factor = 50;
  /// Build the returned m from the completed data instead of the window.
  /// Much smaller error, but it no longer decreases monotonically in N.
  bool extrapolate = false;
};

struct ComparisonRecord {
  complex grid_point;
  complex forward;
  complex reconstructed;
  double abs_error;
};

struct PipelineReport {
  PipelinePath path = PipelinePath::Measure;
  std::vector<ComparisonRecord> records;
  double sup_error = 0.0;
  std::size_t count = 0;
  /// Extrapolated pi * lim m(iy)/(iy) of the reconstruction.
  double mass_at_infinity = 0.0;
  /// Zeros recovered for indices that only had norming constants (mixed path).
  std::map<int, double> recovered_second;
};

/// Reconstructed m_{alpha1,beta} as a callable.
class ReconstructedWeyl {
 public:
  ReconstructedWeyl(HerglotzForm form, Matrix2r back_map);

  complex operator()(complex z) const;
  const HerglotzForm& form() const { return form_; }

 private:
  HerglotzForm form_;
  Matrix2r back_map_;
};

struct Reconstruction {
  PipelinePath path;
  ReconstructedWeyl weyl;
  std::map<int, double> recovered_second;
};

/// Runs the reconstruction chain on the data alone.
Reconstruction reconstruct_weyl(const InverseProblem& problem, const PipelineOptions& options = {});

/// reconstruct_weyl followed by comparison with weyl_m(reference, (alpha1, beta)).
PipelineReport inverse_pipeline(const InverseProblem& problem, const Hamiltonian& reference,
                                std::span<const complex> grid, const PipelineOptions& options = {});

/// 10 x 10 points on [-0.5, 0.5] x [0.5, 1.5] i.
std::vector<complex> default_comparison_grid();

}  // namespace mif::canonical
