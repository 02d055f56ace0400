#include "mif/inverse_pipeline.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "mif/clark.hpp"
#include "mif/errors.hpp"
#include "mif/reconstruct.hpp"

namespace mif::canonical {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerate = 1e-15;
constexpr int kMaxWindowDoublings = 40;
constexpr double kMaxWindowSteps = 2e5;

int count_negative(std::span<const double> xs) {
  return static_cast<int>(std::count_if(xs.begin(), xs.end(), [](double x) { return x < 0.0; }));
}

void check_problem(const InverseProblem& p) {
  for (std::size_t i = 0; i < p.spectrum.size(); ++i) {
    if (!std::isfinite(p.spectrum[i]) || (i > 0 && !(p.spectrum[i - 1] < p.spectrum[i]))) {
      throw DomainError("spectrum must be finite and strictly increasing");
    }
  }
  for (const auto& [n, g] : p.norming_constants) {
    if (n < p.first_index || n > p.last_index()) {
      throw DomainError("norming constant for index " + std::to_string(n) + " outside the window");
    }
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw DomainError("norming constant at index " + std::to_string(n) + " must be positive");
    }
  }
}

ReconstructedWeyl measure_path(const InverseProblem& p) {
  if (p.norming_constants.size() != p.spectrum.size() || !p.second_spectrum.empty()) {
    throw DomainError("a spectral measure needs a norming constant at every index");
  }
  const double c = std::cos(p.beta - p.alpha1) / std::sin(p.beta - p.alpha1);
  std::vector<double> masses;
  masses.reserve(p.spectrum.size());
  for (const auto& [n, g] : p.norming_constants) masses.push_back(kClarkMassPerNormingConstant * g);

  const bool positive = !p.spectrum.empty() && p.spectrum.front() > 0.0;
  if (positive && c != 0.0) {
    SpectralDataset data;
    data.mode = Indexing::BoundedBelow;
    data.first_index = 1;
    data.spectrum = p.spectrum;
    for (std::size_t k = 0; k < masses.size(); ++k) data.masses[1 + static_cast<int>(k)] = masses[k];
    data.constant = ValueAtZero{c};
    return {reconstruct_bounded_below(data, c), Matrix2r::Identity()};
  }
  if (c == 0.0) {
    // m(0) = 0 puts 0 in the second spectrum; L = -(1/pi) sum mu/a directly.
    double s = 0.0;
    for (std::size_t k = 0; k < masses.size(); ++k) s += masses[k] / p.spectrum[k];
    return {PoleExpansionForm(-s / kPi, p.spectrum, masses), Matrix2r::Identity()};
  }
  SpectralDataset data;
  data.first_index = p.first_index;
  data.spectrum = p.spectrum;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    data.masses[p.first_index + static_cast<int>(k)] = masses[k];
  }
  data.constant = ValueAtZero{c};
  return {reconstruct_full(data), Matrix2r::Identity()};
}

}  // namespace

const char* path_name(PipelinePath path) {
  switch (path) {
    case PipelinePath::Measure:
      return "measure";
    case PipelinePath::TwoSpectra:
      return "two-spectra";
    case PipelinePath::Mixed:
      return "mixed";
  }
  return "unknown";
}

std::pair<double, double> window_for_count(const Hamiltonian& hamiltonian,
                                           const BoundaryPair& boundary, std::size_t count) {
  if (count == 0) throw DomainError("window_for_count needs a positive count");
  const double step = kPi / (2.0 * hamiltonian.length());
  double reach = 2.0 * kPi * static_cast<double>(count) / hamiltonian.length();
  std::vector<double> found;
  for (int k = 0; k < kMaxWindowDoublings; ++k, reach *= 2.0) {
    if (2.0 * reach / step > kMaxWindowSteps) break;
    found = eigenvalues(hamiltonian, boundary, -reach, reach);
    if (found.size() >= count + 2) break;
  }
  if (found.size() < count) {
    throw NumericalFailure("found only " + std::to_string(found.size()) + " eigenvalues, wanted " +
                           std::to_string(count));
  }
  std::vector<double> by_modulus = found;
  std::stable_sort(by_modulus.begin(), by_modulus.end(),
                   [](double x, double y) { return std::abs(x) < std::abs(y); });
  by_modulus.resize(count);
  const double lo = *std::min_element(by_modulus.begin(), by_modulus.end());
  const double hi = *std::max_element(by_modulus.begin(), by_modulus.end());
  const auto first = std::lower_bound(found.begin(), found.end(), lo);
  const auto last = std::upper_bound(found.begin(), found.end(), hi);
  const double below = first != found.begin() ? 0.5 * (lo + *(first - 1)) : lo - step;
  const double above = last != found.end() ? 0.5 * (hi + *last) : hi + step;
  return {below, above};
}

InverseProblem measure_problem(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                               double lo, double hi) {
  InverseProblem p;
  p.alpha1 = boundary.alpha;
  p.beta = boundary.beta;
  p.spectrum = eigenvalues(hamiltonian, boundary, lo, hi);
  p.first_index = -count_negative(p.spectrum);
  const auto gammas = norming_constants(hamiltonian, boundary, p.spectrum);
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    p.norming_constants[p.first_index + static_cast<int>(k)] = gammas[k];
  }
  return p;
}

InverseProblem two_boundary_problem(const Hamiltonian& hamiltonian,
                                    const GeneralizedBoundary& boundary, double lo, double hi,
                                    const std::set<int>& with_masses) {
  const BoundaryPair first(boundary.alpha1(), boundary.beta());
  const BoundaryPair second(boundary.alpha2(), boundary.beta());

  InverseProblem p;
  p.alpha1 = boundary.alpha1();
  p.alpha2 = boundary.alpha2();
  p.beta = boundary.beta();
  p.spectrum = eigenvalues(hamiltonian, first, lo, hi);
  p.first_index = -count_negative(p.spectrum);
  if (p.spectrum.empty()) return p;

  std::vector<double> zeros = eigenvalues(hamiltonian, second, lo, hi);
  double from = hi;
  double step = std::max(hi - lo, kPi / hamiltonian.length());
  for (int k = 0; k < kMaxWindowDoublings && (zeros.empty() || zeros.back() <= p.spectrum.back());
       ++k, step *= 2.0) {
    for (const double b : eigenvalues(hamiltonian, second, from, from + step)) {
      if (zeros.empty() || b > zeros.back()) zeros.push_back(b);
    }
    from += step;
  }

  for (const int n : with_masses) {
    if (n < p.first_index || n > p.last_index()) {
      throw DomainError("index " + std::to_string(n) + " is outside the spectral window");
    }
  }
  for (int n = p.first_index; n <= p.last_index(); ++n) {
    const std::size_t pos = static_cast<std::size_t>(n - p.first_index);
    const double a = p.spectrum[pos];
    if (with_masses.count(n) != 0) {
      const double x[] = {a};
      p.norming_constants[n] = norming_constants(hamiltonian, first, x).front();
      continue;
    }
    const auto it = std::upper_bound(zeros.begin(), zeros.end(), a);
    if (it == zeros.end() || (pos + 1 < p.spectrum.size() && !(*it < p.spectrum[pos + 1]))) {
      throw InconsistentDataError("no point of the second spectrum in the gap after a_" +
                                  std::to_string(n));
    }
    p.second_spectrum[n] = *it;
  }
  return p;
}

ReconstructedWeyl::ReconstructedWeyl(HerglotzForm form, Matrix2r back_map)
    : form_(std::move(form)), back_map_(std::move(back_map)) {}

complex ReconstructedWeyl::operator()(complex z) const {
  return mobius_apply(back_map_, evaluate(form_, z));
}

namespace {

// Lattice a(i) = offset + spacing * i fitted to one side of the window, with
// the mean position of the known b inside their gaps.
struct TailModel {
  double spacing;
  double offset;
  double fraction;  // (b - a) / spacing

  double pole(int i) const { return offset + spacing * i; }
};

// Smooth bump on (0, 1). Weighted means of quasi-periodic sequences converge
// much faster with it than plain means.
double bump(double t) {
  return t <= 0.0 || t >= 1.0 ? 0.0 : std::exp(-1.0 / (t * (1.0 - t)));
}

TailModel tail_model(const InverseProblem& p, bool right) {
  const int n = static_cast<int>(p.spectrum.size());
  const int k = std::max(2, n / 2);
  const int lo = right ? n - k : 0;
  const auto& a = p.spectrum;
  const auto weight = [&](int j, int m) { return bump((j + 0.5) / m); };

  double ws = 0.0;
  double wsum = 0.0;
  for (int j = 0; j + 1 < k; ++j) {
    const double w = weight(j, k - 1);
    ws += w * (a[lo + j + 1] - a[lo + j]);
    wsum += w;
  }
  const double spacing = ws / wsum;

  double wo = 0.0;
  wsum = 0.0;
  for (int j = 0; j < k; ++j) {
    const double w = weight(j, k);
    wo += w * (a[lo + j] - spacing * (lo + j));
    wsum += w;
  }
  const double offset = wo / wsum;

  double wr = 0.0;
  wsum = 0.0;
  const auto accumulate = [&](int from, int to) {
    for (int i = from; i < to; ++i) {
      const auto it = p.second_spectrum.find(p.first_index + i);
      if (it == p.second_spectrum.end()) continue;
      const double w = weight(i - from, to - from);
      wr += w * (it->second - a[i]) / spacing;
      wsum += w;
    }
  };
  accumulate(lo, lo + k);
  if (wsum == 0.0) accumulate(0, n);
  if (wsum == 0.0) {
    // Only the end points carry known b; bump weights vanish there.
    for (const auto& [idx, b] : p.second_spectrum) {
      wr += (b - a[static_cast<std::size_t>(idx - p.first_index)]) / spacing;
      wsum += 1.0;
    }
  }
  return {spacing, offset, std::clamp(wr / wsum, 0.02, 0.98)};
}

}  // namespace

InverseProblem complete_tail(const InverseProblem& problem, std::size_t pairs_per_side) {
  if (!problem.alpha2 || problem.spectrum.size() < 4 || problem.second_spectrum.empty() ||
      pairs_per_side == 0) {
    return problem;
  }
  const int n = static_cast<int>(problem.spectrum.size());
  const TailModel left = tail_model(problem, false);
  const TailModel right = tail_model(problem, true);
  const int extra = static_cast<int>(pairs_per_side);

  // The added pairs must keep interlacing across both joins.
  const double left_start =
      std::min(left.pole(-1), problem.spectrum.front() - 0.5 * (1.0 + left.fraction) * left.spacing);
  double right_start = right.pole(n);
  double floor = problem.spectrum.back() + 0.5 * right.spacing;
  if (const auto it = problem.second_spectrum.find(problem.last_index());
      it != problem.second_spectrum.end()) {
    floor = it->second + 0.5 * (1.0 - right.fraction) * right.spacing;
  }
  right_start = std::max(right_start, floor);

  InverseProblem out = problem;
  out.first_index = problem.first_index - extra;
  out.spectrum.clear();
  out.spectrum.reserve(problem.spectrum.size() + 2 * pairs_per_side);
  for (int j = extra; j >= 1; --j) {
    const double a = left_start - (j - 1) * left.spacing;
    out.second_spectrum[problem.first_index - j] = a + left.fraction * left.spacing;
    out.spectrum.push_back(a);
  }
  out.spectrum.insert(out.spectrum.end(), problem.spectrum.begin(), problem.spectrum.end());
  for (int j = 0; j < extra; ++j) {
    const double a = right_start + j * right.spacing;
    out.second_spectrum[problem.last_index() + 1 + j] = a + right.fraction * right.spacing;
    out.spectrum.push_back(a);
  }
  return out;
}

Reconstruction reconstruct_weyl(const InverseProblem& problem, const PipelineOptions& options) {
  check_problem(problem);
  const BoundaryPair boundary(problem.alpha1, problem.beta);
  if (std::abs(std::sin(problem.beta - problem.alpha1)) < kDegenerate) {
    throw DomainError("beta = alpha1 makes m(0) = cot(0) infinite; this pairing is not supported");
  }
  if (!problem.alpha2) {
    return {PipelinePath::Measure, measure_path(problem), {}};
  }

  const GeneralizedBoundary gb(problem.alpha1, *problem.alpha2, problem.beta);
  if (std::abs(std::sin(problem.beta - gb.alpha2())) < kDegenerate) {
    throw DomainError("beta = alpha2 puts 0 in the second spectrum; this pairing is not supported");
  }
  const Matrix2r r = boundary_rotation(gb.alpha1(), gb.alpha2());
  const ExtendedComplex cot_beta = std::sin(gb.beta()) == 0.0
                                       ? ExtendedComplex::infinity()
                                       : ExtendedComplex{std::cos(gb.beta()) / std::sin(gb.beta())};
  const ExtendedComplex raw_at_zero = mobius_apply(r, cot_beta);
  if (raw_at_zero.infinite) throw DomainError("generalized m has a pole at 0");
  const double c = gb.orientation() * raw_at_zero.value.real();

  // Hidden b are recovered from the completed data. The returned form uses
  // the completed data only when extrapolation is requested; otherwise it is
  // the product over the window with the recovered b filled in.
  const InverseProblem completed = complete_tail(problem, options.tail_factor * problem.spectrum.size());
  const double scale = std::abs(std::sin(gb.alpha1() - gb.alpha2()));
  SpectralDataset data;
  data.first_index = completed.first_index;
  data.spectrum = completed.spectrum;
  for (const auto& [n, g] : completed.norming_constants) {
    data.masses[n] = kClarkMassPerNormingConstant * scale * g;
  }
  data.known_second = completed.second_spectrum;
  data.constant = ValueAtZero{c};
  MixedReconstruction mixed = mixed_reconstruct(data);
  HerglotzProductForm form = mixed.form();
  if (!options.extrapolate && completed.spectrum.size() != problem.spectrum.size()) {
    SpectralDataset window;
    window.first_index = problem.first_index;
    window.spectrum = problem.spectrum;
    window.known_second = problem.second_spectrum;
    window.known_second.insert(mixed.recovered_second.begin(), mixed.recovered_second.end());
    window.constant = ValueAtZero{c};
    form = mixed_reconstruct(window).form();
  }

  Matrix2r orient = Matrix2r::Identity();
  orient(0, 0) = gb.orientation();
  const Matrix2r back_map = rotation(-gb.alpha1()) * r.inverse() * orient;
  const PipelinePath path =
      problem.norming_constants.empty() ? PipelinePath::TwoSpectra : PipelinePath::Mixed;
  return {path, ReconstructedWeyl(std::move(form), back_map), std::move(mixed.recovered_second)};
}

PipelineReport inverse_pipeline(const InverseProblem& problem, const Hamiltonian& reference,
                                std::span<const complex> grid, const PipelineOptions& options) {
  if (grid.empty()) throw DomainError("comparison grid is empty");
  const Reconstruction rec = reconstruct_weyl(problem, options);
  const BoundaryPair boundary(problem.alpha1, problem.beta);

  PipelineReport report;
  report.path = rec.path;
  report.count = problem.spectrum.size();
  report.recovered_second = rec.recovered_second;
  for (const complex z : grid) {
    const complex forward = weyl_m(reference, boundary, z);
    const complex reconstructed = rec.weyl(z);
    const double err = std::abs(forward - reconstructed);
    report.records.push_back({z, forward, reconstructed, err});
    report.sup_error = std::max(report.sup_error, err);
  }
  constexpr std::array<double, 3> probes{1e1, 1e2, 1e3};
  report.mass_at_infinity = mass_at_infinity_of(rec.weyl, probes);
  return report;
}

std::vector<complex> default_comparison_grid() {
  std::vector<complex> grid;
  grid.reserve(100);
  for (int j = 0; j < 10; ++j) {
    for (int i = 0; i < 10; ++i) {
      grid.emplace_back(-0.5 + i / 9.0, 0.5 + j / 9.0);
    }
  }
  return grid;
}

}  // namespace mif::canonical
