#include "mif/canonical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mif/errors.hpp"
#include "mif/roots.hpp"

namespace mif::canonical {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTraceTolerance = 1e-12;
constexpr double kAngleTolerance = 1e-15;
constexpr int kMaxScanDepth = 12;
constexpr std::size_t kMaxScanPoints = 2'000'000;

template <typename T>
T sinc(T x) {
  if (std::abs(x) < 1e-4) {
    const T x2 = x * x;
    return T(1.0) - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// (1 - sinc x) / x^2
double one_minus_sinc_over_square(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return 1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0 - x2 * x2 * x2 / 362880.0;
  }
  return (1.0 - std::sin(x) / x) / (x * x);
}

// K = J H, so that f' = z K f.
Matrix2r generator(const Cell& c) {
  Matrix2r k;
  k << -c.h12, -c.h22, c.h11, c.h12;
  return k;
}

double root_det(const Cell& c) { return std::sqrt(std::max(0.0, c.det())); }

Matrix2r real_propagator(const Cell& cell, double width, double x) {
  const double omega = x * width * root_det(cell);
  return std::cos(omega) * Matrix2r::Identity() + (sinc(omega) * x * width) * generator(cell);
}

void check_angle(double angle, const char* name) {
  if (!std::isfinite(angle) || angle < 0.0 || angle >= kPi) {
    throw DomainError(std::string(name) + " must lie in [0, pi), got " + std::to_string(angle));
  }
}

struct PhaseSample {
  double x;
  double phase;  // Prüfer angle of u(L, x)
};

double shoot(const Hamiltonian& h, double alpha, double x) {
  Eigen::Vector2d u(std::cos(alpha), std::sin(alpha));
  double phase = alpha;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Cell& cell = h.cells()[i];
    double width = h.width(i);
    // Over x * sqrt(det H) * t = pi the propagator is -I: u turns by exactly
    // pi. What remains turns u monotonically by less than pi, and two
    // substeps keep each atan2 increment away from the branch cut.
    const double d = root_det(cell);
    if (d > 0.0) {
      const double turns = std::floor(std::abs(x) * d * width / kPi);
      if (turns > 0.0) {
        phase += std::copysign(kPi * turns, x);
        width -= turns * kPi / (std::abs(x) * d);
        if (std::fmod(turns, 2.0) == 1.0) u = -u;
      }
    }
    const Matrix2r step = real_propagator(cell, 0.5 * width, x);
    for (int s = 0; s < 2; ++s) {
      const Eigen::Vector2d next = step * u;
      phase += std::atan2(u(0) * next(1) - u(1) * next(0), u.dot(next));
      u = next / next.norm();
    }
  }
  return phase;
}

long phase_index(double phase, double beta) {
  return static_cast<long>(std::floor((phase - beta) / kPi));
}

// Roots of w are the points where the phase crosses beta + k pi. The phase is
// nondecreasing in x, so the count of crossings in (l, r] is the difference
// of the phase indices, and phase - beta - k pi brackets the k-th crossing.
class Scanner {
 public:
  Scanner(const Hamiltonian& h, const BoundaryPair& bp) : h_(h), bp_(bp) {}

  PhaseSample sample(double x) const { return {x, shoot(h_, bp_.alpha, x)}; }

  void interval(const PhaseSample& l, const PhaseSample& r, int depth) {
    const long k = phase_index(r.phase, bp_.beta);
    const long count = k - phase_index(l.phase, bp_.beta);
    if (count == 0) return;
    if (count == 1) {
      result.values.push_back(refine(l, r, k));
      return;
    }
    if (count < 0 || depth >= kMaxScanDepth) {
      result.complete = false;
      return;
    }
    ++result.refinements;
    const PhaseSample m = sample(0.5 * (l.x + r.x));
    interval(l, m, depth + 1);
    interval(m, r, depth + 1);
  }

  EigenvalueScan result;

 private:
  double refine(const PhaseSample& l, const PhaseSample& r, long k) const {
    // Same arithmetic as phase_index, so the bracket signs agree with the count.
    const auto g = [&](double phase) { return (phase - bp_.beta) / kPi - static_cast<double>(k); };
    RootOptions options;
    options.bisection_width = 1e-11;
    options.relative_tolerance = 1e-14;
    return refine_root([&](double x) { return g(shoot(h_, bp_.alpha, x)); }, l.x, r.x, g(l.phase),
                       g(r.phase), options);
  }

  const Hamiltonian& h_;
  const BoundaryPair& bp_;
};

}  // namespace

Matrix2r symplectic_unit() {
  Matrix2r j;
  j << 0.0, -1.0, 1.0, 0.0;
  return j;
}

Matrix2r Cell::matrix() const {
  Matrix2r m;
  m << h11, h12, h12, h22;
  return m;
}

Hamiltonian::Hamiltonian(std::vector<double> grid, std::vector<Cell> cells)
    : grid_(std::move(grid)), cells_(std::move(cells)) {
  if (cells_.empty() || grid_.size() != cells_.size() + 1) {
    throw DomainError("Hamiltonian needs M >= 1 cells and M+1 grid points");
  }
  if (grid_.front() != 0.0) throw DomainError("Hamiltonian grid must start at 0");
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    if (!(grid_[i] < grid_[i + 1]) || !std::isfinite(grid_[i + 1])) {
      throw DomainError("Hamiltonian grid must be strictly increasing at " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    const std::string where = " in cell " + std::to_string(i);
    if (!std::isfinite(c.h11) || !std::isfinite(c.h12) || !std::isfinite(c.h22)) {
      throw DomainError("non-finite entry" + where);
    }
    if (std::abs(c.h11 + c.h22 - 1.0) > kTraceTolerance) {
      throw DomainError("trace must equal 1" + where);
    }
    if (c.h11 < 0.0 || c.h22 < 0.0 || c.det() < -kTraceTolerance) {
      throw DomainError("H must be positive semidefinite" + where);
    }
  }
}

Hamiltonian Hamiltonian::constant(double length, Cell cell) {
  return Hamiltonian({0.0, length}, {cell});
}

Hamiltonian Hamiltonian::uniform(double length, std::vector<Cell> cells) {
  if (!(length > 0.0)) throw DomainError("Hamiltonian length must be positive");
  std::vector<double> grid(cells.size() + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = length * static_cast<double>(i) / static_cast<double>(cells.size());
  }
  if (!grid.empty()) grid.back() = length;
  return Hamiltonian(std::move(grid), std::move(cells));
}

BoundaryPair::BoundaryPair(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  check_angle(alpha, "alpha");
  check_angle(beta, "beta");
}

Matrix2c cell_propagator(const Cell& cell, double width, complex z) {
  const complex omega = z * width * root_det(cell);
  const Matrix2c k = generator(cell).cast<complex>();
  return std::cos(omega) * Matrix2c::Identity() + (sinc(omega) * z * width) * k;
}

TransferSample transfer_matrix(const Hamiltonian& hamiltonian, complex z) {
  Matrix2c t = Matrix2c::Identity();
  for (std::size_t i = 0; i < hamiltonian.size(); ++i) {
    t = cell_propagator(hamiltonian.cells()[i], hamiltonian.width(i), z) * t;
  }
  return {z, t};
}

Matrix2r transfer_matrix_real(const Hamiltonian& hamiltonian, double x) {
  Matrix2r t = Matrix2r::Identity();
  for (std::size_t i = 0; i < hamiltonian.size(); ++i) {
    t = real_propagator(hamiltonian.cells()[i], hamiltonian.width(i), x) * t;
  }
  return t;
}

// --- membership -------------------------------------------------------------

std::vector<complex> default_membership_samples() {
  return {{0.0, 0.0},  {0.5, 0.0},  {-0.5, 0.0}, {1.0, 0.0},  {-1.0, 0.0}, {2.5, 0.0},
          {-2.5, 0.0}, {0.3, 0.2},  {-1.0, 0.5}, {2.0, 1.0},  {0.0, 0.5},  {0.0, 1.5},
          {-0.7, 2.0}, {3.0, 0.1},  {1.0, -1.0}, {-2.0, -0.5}};
}

bool MembershipReport::member() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

MembershipReport tm_membership(const TransferFamily& family, double length,
                               const MembershipOptions& options) {
  const double h = options.derivative_step;
  if (!(h > 0.0) || h > 1e-2) {
    throw DomainError("insufficient samples near 0: derivative step must lie in (0, 1e-2]");
  }
  const std::vector<complex> samples =
      options.samples.empty() ? default_membership_samples() : options.samples;

  double det_residual = 0.0;
  double real_residual = 0.0;
  double conj_residual = 0.0;
  double positivity_residual = 0.0;
  const Matrix2c j = symplectic_unit().cast<complex>();
  const complex i_unit(0.0, 1.0);

  for (const complex z : samples) {
    const Matrix2c t = family(z);
    const double scale = std::max(1.0, t.cwiseAbs2().sum());
    det_residual = std::max(det_residual, std::abs(t.determinant() - 1.0) / scale);
    if (z.imag() == 0.0) {
      real_residual = std::max(real_residual, t.imag().cwiseAbs().maxCoeff() / std::sqrt(scale));
    }
    const Matrix2c tc = family(std::conj(z));
    conj_residual =
        std::max(conj_residual, (tc - t.conjugate()).cwiseAbs().maxCoeff() / std::sqrt(scale));
    if (z.imag() >= 0.0) {
      Matrix2c form = i_unit * (t.adjoint() * j * t - j);
      form = 0.5 * (form + form.adjoint()).eval();
      const double lowest = Eigen::SelfAdjointEigenSolver<Matrix2c>(form).eigenvalues()(0);
      positivity_residual = std::max(positivity_residual, std::max(0.0, -lowest) / scale);
    }
  }

  const Matrix2c at_zero = family(complex(0.0));
  const double identity_residual = (at_zero - Matrix2c::Identity()).cwiseAbs().maxCoeff();
  const Matrix2c derivative = (family(complex(h)) - family(complex(-h))) / (2.0 * h);
  const double measured = (derivative(1, 0) - derivative(0, 1)).real();

  MembershipReport report;
  report.measured_length = measured;
  const double tol = options.tolerance;
  auto add = [&](const char* name, double residual) {
    report.checks.push_back({name, residual, std::isfinite(residual) && residual <= tol});
  };
  add("determinant", det_residual);
  add("identity_at_zero", identity_residual);
  add("real_on_axis", real_residual);
  add("conjugate_symmetry", conj_residual);
  add("positivity", positivity_residual);
  add("length", std::abs(measured - length));
  return report;
}

TransferFamily shifted_family(TransferFamily base, double shift) {
  return [base = std::move(base), shift](complex z) {
    Matrix2c s;
    s << 1.0, 0.0, shift * z, 1.0;
    return Matrix2c(s * base(z));
  };
}

// --- m-functions ------------------------------------------------------------

namespace {

// f(0) = T^{-1} (cos beta, sin beta) with T^{-1} = [[D, -B], [-C, A]].
Eigen::Vector2cd initial_value(const Hamiltonian& hamiltonian, double beta, complex z) {
  const TransferSample t = transfer_matrix(hamiltonian, z);
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  return {t.D() * cb - t.B() * sb, -t.C() * cb + t.A() * sb};
}

}  // namespace

complex weyl_m(const Hamiltonian& hamiltonian, const BoundaryPair& boundary, complex z) {
  const Eigen::Vector2cd f = initial_value(hamiltonian, boundary.beta, z);
  const double ca = std::cos(boundary.alpha);
  const double sa = std::sin(boundary.alpha);
  const complex den = -sa * f(0) + ca * f(1);
  if (den == 0.0) {
    throw DomainError("weyl_m: z = " + std::to_string(z.real()) + "+" +
                      std::to_string(z.imag()) + "i is an eigenvalue");
  }
  return (ca * f(0) + sa * f(1)) / den;
}

double boundary_functional(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                           double x) {
  const Matrix2r t = transfer_matrix_real(hamiltonian, x);
  const Eigen::Vector2d u = t * Eigen::Vector2d(std::cos(boundary.alpha), std::sin(boundary.alpha));
  return u(0) * std::sin(boundary.beta) - u(1) * std::cos(boundary.beta);
}

double pruefer_angle(const Hamiltonian& hamiltonian, double alpha, double x) {
  check_angle(alpha, "alpha");
  return shoot(hamiltonian, alpha, x);
}

EigenvalueScan scan_eigenvalues(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                                double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError("eigenvalue window must satisfy lo < hi");
  }
  // Eigenvalues of a trace-normed system are at least 2 pi / L apart on
  // average; four samples per such spacing keep most intervals simple.
  const double step = kPi / (2.0 * hamiltonian.length());
  const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  if (intervals > kMaxScanPoints) {
    throw DomainError("eigenvalue window too wide for the scan grid");
  }

  Scanner scanner(hamiltonian, boundary);
  PhaseSample left = scanner.sample(lo);
  // A root sitting exactly on lo belongs to the closed window but not to any
  // half-open interval (x_k, x_{k+1}].
  const double offset = (left.phase - boundary.beta) / kPi;
  if (offset - std::floor(offset) < 1e-12) scanner.result.values.push_back(lo);
  const std::size_t n = std::max<std::size_t>(1, intervals);
  for (std::size_t k = 1; k <= n; ++k) {
    const double x = k == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n);
    const PhaseSample right = scanner.sample(x);
    scanner.interval(left, right, 0);
    left = right;
  }
  std::sort(scanner.result.values.begin(), scanner.result.values.end());
  return scanner.result;
}

std::vector<double> eigenvalues(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                                double lo, double hi) {
  EigenvalueScan scan = scan_eigenvalues(hamiltonian, boundary, lo, hi);
  if (!scan.complete) {
    throw NumericalFailure("eigenvalue scan on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "] did not resolve every interval after " +
                           std::to_string(kMaxScanDepth) + " halvings");
  }
  return std::move(scan.values);
}

std::vector<double> norming_constants(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                                      std::span<const double> eigenvalues) {
  std::vector<double> gammas;
  gammas.reserve(eigenvalues.size());
  for (std::size_t n = 0; n < eigenvalues.size(); ++n) {
    const double x = eigenvalues[n];
    Eigen::Vector2d u(std::cos(boundary.alpha), std::sin(boundary.alpha));
    double integral = 0.0;
    for (std::size_t i = 0; i < hamiltonian.size(); ++i) {
      const Cell& cell = hamiltonian.cells()[i];
      const Matrix2r hm = cell.matrix();
      const double width = hamiltonian.width(i);
      const double theta = x * root_det(cell);
      const Eigen::Vector2d r = x * (generator(cell) * u);
      const double cc = 0.5 * width * (1.0 + sinc(2.0 * theta * width));
      const double sw = sinc(theta * width);
      const double cs = 0.5 * width * width * sw * sw;
      const double ss = 2.0 * width * width * width * one_minus_sinc_over_square(2.0 * theta * width);
      integral += cc * u.dot(hm * u) + 2.0 * cs * u.dot(hm * r) + ss * r.dot(hm * r);
      u = std::cos(theta * width) * u + width * sw * r;
    }
    const double residual =
        std::abs(u(0) * std::sin(boundary.beta) - u(1) * std::cos(boundary.beta)) /
        std::max(1.0, u.norm());
    if (!(residual <= 1e-8)) {
      throw DomainError("norming_constants: input " + std::to_string(n) + " (" +
                        std::to_string(x) + ") is not an eigenvalue");
    }
    if (!(integral > 0.0)) {
      throw NumericalFailure("norming_constants: non-positive energy at input " +
                             std::to_string(n));
    }
    gammas.push_back(1.0 / integral);
  }
  return gammas;
}

std::vector<double> SpectralMeasure::clark_masses() const {
  std::vector<double> out;
  out.reserve(norming_constants.size());
  for (const double g : norming_constants) out.push_back(kClarkMassPerNormingConstant * g);
  return out;
}

SpectralMeasure spectral_measure(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                                 double lo, double hi) {
  std::vector<double> values = eigenvalues(hamiltonian, boundary, lo, hi);
  std::vector<double> gammas = norming_constants(hamiltonian, boundary, values);
  return {std::move(values), std::move(gammas), boundary};
}

// --- Möbius action ----------------------------------------------------------

ExtendedComplex mobius_apply(const Matrix2r& m, ExtendedComplex w) {
  if (m.determinant() == 0.0) throw DomainError("Möbius matrix must be invertible");
  complex num, den;
  if (w.infinite) {
    num = m(0, 0);
    den = m(1, 0);
  } else {
    num = m(0, 0) * w.value + m(0, 1);
    den = m(1, 0) * w.value + m(1, 1);
  }
  if (den == 0.0) return ExtendedComplex::infinity();
  return {num / den, false};
}

complex mobius_apply(const Matrix2r& m, complex w) {
  const ExtendedComplex r = mobius_apply(m, ExtendedComplex{w, false});
  if (r.infinite) throw DomainError("Möbius image is infinite");
  return r.value;
}

Matrix2r rotation(double alpha) {
  Matrix2r r;
  r << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
  return r;
}

Matrix2r boundary_rotation(double alpha1, double alpha2) {
  Matrix2r r;
  r << -std::sin(alpha2), std::cos(alpha2), -std::sin(alpha1), std::cos(alpha1);
  return r;
}

GeneralizedBoundary::GeneralizedBoundary(double alpha1, double alpha2, double beta)
    : alpha1_(alpha1), alpha2_(alpha2), beta_(beta) {
  check_angle(alpha1, "alpha1");
  check_angle(alpha2, "alpha2");
  check_angle(beta, "beta");
  const double s = std::sin(alpha1 - alpha2);
  if (std::abs(s) < kAngleTolerance) throw DomainError("alpha1 and alpha2 must differ");
  orientation_ = s > 0.0 ? 1 : -1;
}

complex generalized_m(const Hamiltonian& hamiltonian, const GeneralizedBoundary& boundary,
                      complex z) {
  // R_{a1,a2} applied to m_{0,beta} = f1/f2, written in terms of f directly.
  const Eigen::Vector2cd f = initial_value(hamiltonian, boundary.beta(), z);
  const double s1 = std::sin(boundary.alpha1()), c1 = std::cos(boundary.alpha1());
  const double s2 = std::sin(boundary.alpha2()), c2 = std::cos(boundary.alpha2());
  const complex den = -s1 * f(0) + c1 * f(1);
  if (den == 0.0) throw DomainError("generalized_m: z is a pole");
  return static_cast<double>(boundary.orientation()) * (-s2 * f(0) + c2 * f(1)) / den;
}

ResidueRatio residue_ratio(double alpha1, double alpha2) {
  check_angle(alpha1, "alpha1");
  check_angle(alpha2, "alpha2");
  const double s1 = std::sin(alpha1), c1 = std::cos(alpha1);
  const double s2 = std::sin(alpha2), c2 = std::cos(alpha2);
  if (std::abs(std::sin(alpha1 - alpha2)) < kAngleTolerance) {
    throw DomainError("residue_ratio: alpha1 and alpha2 must differ");
  }
  if (std::abs(s1) < kAngleTolerance) return {-c1 / s2, ResidueCase::SineZero};
  if (std::abs(c1) < kAngleTolerance) return {s1 / c2, ResidueCase::CosineZero};
  return {1.0 / std::sin(alpha1 - alpha2), ResidueCase::Generic};
}

Hamiltonian rotate_hamiltonian(const Hamiltonian& hamiltonian, double gamma) {
  const Matrix2r r = rotation(gamma);
  std::vector<Cell> cells;
  cells.reserve(hamiltonian.size());
  for (const Cell& c : hamiltonian.cells()) {
    const Matrix2r m = r.transpose() * c.matrix() * r;
    const double h11 = m(0, 0);
    cells.push_back({h11, 0.5 * (m(0, 1) + m(1, 0)), 1.0 - h11});
  }
  return Hamiltonian({hamiltonian.grid().begin(), hamiltonian.grid().end()}, std::move(cells));
}

}  // namespace mif::canonical
