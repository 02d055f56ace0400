#include "pipeline_cases.hpp"

#include <fmt/format.h>

namespace mif::testing {

PipelineCase random_pipeline_case(Rng& rng) {
  const double length = std::uniform_real_distribution<double>(1.0, 3.0)(rng);
  auto h = random_hamiltonian(rng, 8, length, 0.1, 0.9);
  const double a1 = random_angle(rng);
  const double a2 = random_angle(rng, {a1});
  const double beta = random_angle(rng, {a1, a2});
  return {std::move(h), a1, a2, beta};
}

std::array<double, 3> pipeline_errors(const PipelineCase& c, std::size_t count,
                                     const canonical::PipelineOptions& options) {
  using namespace canonical;
  const BoundaryPair bp(c.alpha1, c.beta);
  const GeneralizedBoundary gb(c.alpha1, c.alpha2, c.beta);
  const auto grid = default_comparison_grid();
  const auto [lo, hi] = window_for_count(c.hamiltonian, bp, count);

  std::array<double, 3> out{};
  out[0] = inverse_pipeline(measure_problem(c.hamiltonian, bp, lo, hi), c.hamiltonian, grid).sup_error;
  const auto two = two_boundary_problem(c.hamiltonian, gb, lo, hi);
  out[1] = inverse_pipeline(two, c.hamiltonian, grid, options).sup_error;
  const auto masses = central_alternate_indices(two.spectrum, two.first_index, 6);
  out[2] = inverse_pipeline(two_boundary_problem(c.hamiltonian, gb, lo, hi, masses), c.hamiltonian, grid,
                            options)
               .sup_error;
  return out;
}

std::string describe(const PipelineCase& c) {
  return fmt::format("cells={} L={:.3f} alpha1={:.3f} alpha2={:.3f} beta={:.3f}", c.hamiltonian.size(),
                     c.hamiltonian.length(), c.alpha1, c.alpha2, c.beta);
}

}  // namespace mif::testing
