// Convergence study for the end-to-end inverse pipelines. Runs the acceptance
// protocol on an independent block of seeds and prints the error at each
// truncation together with the largest error seen at the top truncation.
// The acceptance envelope is frozen from this output.
//
//   convergence_study [cases] [extrapolate]

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "pipeline_cases.hpp"

int main(int argc, char** argv) {
  using namespace mif::testing;
  const int cases = argc > 1 ? std::atoi(argv[1]) : 40;
  const mif::canonical::PipelineOptions options{.extrapolate = argc > 2 && std::string(argv[2]) == "extrapolate"};
  constexpr std::size_t counts[] = {25, 50, 100, 200};
  std::array<std::array<double, 3>, 4> worst{};
  std::array<double, 3> worst_ratio{};
  int failures = 0;
  for (int k = 0; k < cases; ++k) {
    Rng rng(900000 + k);
    const auto c = random_pipeline_case(rng);
    std::printf("case %d: %s\n", k, describe(c).c_str());
    try {
      std::array<std::array<double, 3>, 4> e{};
      for (std::size_t i = 0; i < 4; ++i) {
        e[i] = pipeline_errors(c, counts[i], options);
        std::printf("  N=%3zu  measure=%.3e  two-spectra=%.3e  mixed=%.3e\n", counts[i], e[i][0], e[i][1],
                    e[i][2]);
        for (int p = 0; p < 3; ++p) worst[i][p] = std::max(worst[i][p], e[i][p]);
      }
      for (int p = 0; p < 3; ++p) worst_ratio[p] = std::max(worst_ratio[p], e[2][p] / e[0][p]);
    } catch (const std::exception& ex) {
      ++failures;
      std::printf("  error: %s\n", ex.what());
    }
  }
  std::printf("\nworst sup error per truncation (measure, two-spectra, mixed)\n");
  for (std::size_t i = 0; i < 4; ++i) {
    std::printf("  N=%3zu  %.3e  %.3e  %.3e\n", counts[i], worst[i][0], worst[i][1], worst[i][2]);
  }
  std::printf("worst ratio err(100)/err(25): %.3f %.3f %.3f\n", worst_ratio[0], worst_ratio[1],
              worst_ratio[2]);
  std::printf("cases with errors: %d\n", failures);
  return failures == 0 ? 0 : 1;
}
