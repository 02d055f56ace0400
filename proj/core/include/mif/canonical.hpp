#pragma once

// Forward spectral theory of trace-normed canonical systems J f' = -z H f on
// [0, L] with piecewise-constant H: transfer matrices, eigenvalues, norming
// constants, Weyl m-functions and the rotation-matrix algebra that moves
// between boundary conditions.

#include <Eigen/Core>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mif/herglotz.hpp"

namespace mif::canonical {

using Matrix2c = Eigen::Matrix2cd;
using Matrix2r = Eigen::Matrix2d;

/// The symplectic unit J = [[0, -1], [1, 0]].
Matrix2r symplectic_unit();

/// One constant block of a Hamiltonian: [[h11, h12], [h12, h22]].
struct Cell {
  double h11;
  double h12;
  double h22;

  double det() const { return h11 * h22 - h12 * h12; }
  Matrix2r matrix() const;
};

/// Piecewise-constant, positive semidefinite, trace-normed Hamiltonian.
class Hamiltonian {
 public:
  /// grid holds the M+1 breakpoints 0 = x_0 < ... < x_M = L.
  Hamiltonian(std::vector<double> grid, std::vector<Cell> cells);

  /// A single cell on [0, length].
  static Hamiltonian constant(double length, Cell cell);
  /// Equal-width cells on [0, length].
  static Hamiltonian uniform(double length, std::vector<Cell> cells);

  double length() const { return grid_.back(); }
  std::span<const double> grid() const { return grid_; }
  std::span<const Cell> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  double width(std::size_t cell) const { return grid_[cell + 1] - grid_[cell]; }

 private:
  std::vector<double> grid_;
  std::vector<Cell> cells_;
};

/// Separated boundary conditions f1(0) sin(alpha) - f2(0) cos(alpha) = 0 and
/// f1(L) sin(beta) - f2(L) cos(beta) = 0, with alpha, beta in [0, pi).
struct BoundaryPair {
  double alpha;
  double beta;

  BoundaryPair(double alpha, double beta);
};

struct TransferSample {
  complex z;
  Matrix2c matrix;

  complex A() const { return matrix(0, 0); }
  complex B() const { return matrix(0, 1); }
  complex C() const { return matrix(1, 0); }
  complex D() const { return matrix(1, 1); }
};

/// Propagator exp(z * width * J H) of one constant cell.
Matrix2c cell_propagator(const Cell& cell, double width, complex z);

/// T(L, z), the ordered product of cell propagators.
TransferSample transfer_matrix(const Hamiltonian& hamiltonian, complex z);
/// T(L, x) for real x, in real arithmetic.
Matrix2r transfer_matrix_real(const Hamiltonian& hamiltonian, double x);

// --- transfer-matrix class membership ---------------------------------------

using TransferFamily = std::function<Matrix2c(complex)>;

struct MembershipOptions {
  /// Sample points for det, symmetry and positivity checks.
  std::vector<complex> samples;
  /// Central-difference step for C'(0) - B'(0); must lie in (0, 1e-2].
  double derivative_step = 1e-5;
  double tolerance = 1e-6;
};

/// Default sample set: points on a few rays and on the real axis.
std::vector<complex> default_membership_samples();

struct MembershipCheck {
  std::string name;
  double residual;
  bool passed;
};

struct MembershipReport {
  std::vector<MembershipCheck> checks;
  double measured_length;  ///< C'(0) - B'(0)

  bool member() const;
};

/// Checks det T = 1, T(0) = I, realness on R, T(conj z) = conj T(z),
/// i(T* J T - J) >= 0 for Im z >= 0 and C'(0) - B'(0) = length.
MembershipReport tm_membership(const TransferFamily& family, double length,
                               const MembershipOptions& options = {});

/// T~(z) = [[1, 0], [a z, 1]] T(z).
TransferFamily shifted_family(TransferFamily base, double shift);

// --- m-functions ------------------------------------------------------------

/// Weyl m-function m_{alpha,beta}(z) from f(0) = T(L,z)^{-1} (cos beta, sin beta).
/// Throws DomainError at an eigenvalue.
complex weyl_m(const Hamiltonian& hamiltonian, const BoundaryPair& boundary, complex z);

/// Boundary functional w(z) = u1(L,z) sin(beta) - u2(L,z) cos(beta) with
/// u(0) = (cos alpha, sin alpha).
double boundary_functional(const Hamiltonian& hamiltonian, const BoundaryPair& boundary, double x);

/// Continuous Prüfer angle of u(L, x), starting from alpha at x = 0.
double pruefer_angle(const Hamiltonian& hamiltonian, double alpha, double x);

struct EigenvalueScan {
  std::vector<double> values;
  /// Number of grid intervals that were halved.
  int refinements = 0;
  /// False when an interval still disagreed with the phase count after the
  /// maximum number of halvings.
  bool complete = true;
};

/// Real eigenvalues in [lo, hi] by sign scanning of the boundary functional,
/// with a Prüfer-angle count deciding where to refine.
EigenvalueScan scan_eigenvalues(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                                double lo, double hi);
/// Same as scan_eigenvalues but throws NumericalFailure if incomplete.
std::vector<double> eigenvalues(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                                double lo, double hi);

/// gamma_n = 1 / int_0^L u^T H u dx at each eigenvalue, cell-exact.
/// Throws DomainError when an input is not an eigenvalue.
std::vector<double> norming_constants(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                                      std::span<const double> eigenvalues);

/// Point masses of the Herglotz representation of m_{alpha,beta} per unit
/// norming constant: mu(a_n) = pi * gamma_n.
inline constexpr double kClarkMassPerNormingConstant = std::numbers::pi;

struct SpectralMeasure {
  std::vector<double> eigenvalues;
  std::vector<double> norming_constants;
  BoundaryPair boundary;

  /// Clark masses pi * gamma_n.
  std::vector<double> clark_masses() const;
};

SpectralMeasure spectral_measure(const Hamiltonian& hamiltonian, const BoundaryPair& boundary,
                                 double lo, double hi);

// --- Möbius action ----------------------------------------------------------

/// A point of the extended complex plane.
struct ExtendedComplex {
  complex value;
  bool infinite = false;

  static ExtendedComplex infinity() { return {complex(0.0), true}; }
};

/// (M11 w + M12) / (M21 w + M22) with projective handling of infinity.
ExtendedComplex mobius_apply(const Matrix2r& m, ExtendedComplex w);
complex mobius_apply(const Matrix2r& m, complex w);

/// R_alpha = [[cos, -sin], [sin, cos]].
Matrix2r rotation(double alpha);
/// R_{alpha1,alpha2} = [[-sin alpha2, cos alpha2], [-sin alpha1, cos alpha1]].
Matrix2r boundary_rotation(double alpha1, double alpha2);

/// Boundary data for the generalized m-function whose poles are
/// sigma_{alpha1,beta} and whose zeros are sigma_{alpha2,beta}.
class GeneralizedBoundary {
 public:
  GeneralizedBoundary(double alpha1, double alpha2, double beta);

  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }
  double beta() const { return beta_; }
  /// sign(sin(alpha1 - alpha2)); the raw Möbius image is Herglotz only when +1.
  int orientation() const { return orientation_; }

 private:
  double alpha1_;
  double alpha2_;
  double beta_;
  int orientation_;
};

/// orientation * R_{alpha1,alpha2} m_{0,beta}(z), which is Herglotz.
complex generalized_m(const Hamiltonian& hamiltonian, const GeneralizedBoundary& boundary,
                      complex z);

enum class ResidueCase { Generic, SineZero, CosineZero };

struct ResidueRatio {
  double value;
  ResidueCase which;
};

/// Res(m_{alpha1,beta}, a_n) / Res(R_{alpha1,alpha2} m_{0,beta}, a_n), which is
/// 1/sin(alpha1 - alpha2) with separate closed forms when sin(alpha1) or
/// cos(alpha1) vanishes.
ResidueRatio residue_ratio(double alpha1, double alpha2);

/// H_gamma = R_gamma^T H R_gamma cell by cell.
Hamiltonian rotate_hamiltonian(const Hamiltonian& hamiltonian, double gamma);

}  // namespace mif::canonical
