#pragma once

// Reconstruction of a meromorphic Herglotz function from spectral data: the
// spectrum, Clark masses on all or part of it, the second spectrum on the
// complementary part, and one normalization constant.

#include <map>
#include <variant>
#include <vector>

#include "mif/herglotz.hpp"

namespace mif {

/// l = lim Theta(iy); unimodular and different from 1.
struct InnerLimit {
  complex value;
};
/// c = m(0); finite and nonzero.
struct ValueAtZero {
  double value;
};
/// p = prod a_n / b_n; different from 1.
struct PoleZeroRatio {
  double value;
};

using ConstantSpec = std::variant<InnerLimit, ValueAtZero, PoleZeroRatio>;

/// Throws DomainError / IllPosedError when the tag-specific constraint fails.
void validate_constant(const ConstantSpec& constant);
char constant_kind(const ConstantSpec& constant);

/// Reconstruction input. `masses` and `known_second` partition the index
/// window [first_index, first_index + spectrum.size()).
struct SpectralDataset {
  Indexing mode = Indexing::TwoSided;
  int first_index = 0;
  std::vector<double> spectrum;
  std::map<int, double> masses;
  std::map<int, double> known_second;
  ConstantSpec constant = ValueAtZero{1.0};

  int last_index() const { return first_index + static_cast<int>(spectrum.size()) - 1; }
  double pole(int index) const { return spectrum.at(static_cast<std::size_t>(index - first_index)); }
  bool has_full_masses() const { return masses.size() == spectrum.size(); }

  /// Checks window, ordering, positivity, disjoint cover and gap membership
  /// of the known second-spectrum points. Throws DomainError.
  void validate() const;
};

/// Builds the full-mass dataset of a product form (the forward direction).
SpectralDataset dataset_from_product(const HerglotzProductForm& form, ConstantSpec constant);

/// Bounded-below dataset of a sum form with constant c = m(0). A sum form
/// with positive slope carries mass at infinity and is not the Herglotz
/// function of an interlacing product, so it is rejected with IllPosedError.
SpectralDataset bounded_below_dataset(const HerglotzSumForm& form);

/// L from the spectrum, full masses and one constant:
///   l: L = i(1+l)/(1-l)
///   c: L = c - (1/pi) sum mu_k / a_k
///   p: with S = (1/pi) sum mu_k / a_k, c = S/(1-p) and L = p S/(1-p)
double determine_limit(std::span<const double> spectrum, std::span<const double> masses,
                       const ConstantSpec& constant);

/// m(z) = L + (1/pi) sum mu_k/(a_k - z) from full masses.
PoleExpansionForm reconstruct_full(const SpectralDataset& dataset);

/// Bounded-below reconstruction with c = m(0): zero slope at infinity and
/// offset b = c - (1/pi) sum mu_n / (a_n + a_n^3). All spectrum entries must be
/// positive; shift the spectral parameter otherwise.
HerglotzSumForm reconstruct_bounded_below(const SpectralDataset& dataset, double c);

struct BoundedBelowReconstruction {
  HerglotzSumForm form;
  /// True when an l or p constant stood in for c. That substitution is only
  /// valid when lim m(iy) is known to be finite, which the data cannot show.
  bool conditional;
};

/// Bounded-below reconstruction driven by the dataset's own constant.
BoundedBelowReconstruction reconstruct_bounded_below(const SpectralDataset& dataset);

/// Result of reconstruction from mixed data.
struct MixedReconstruction {
  /// Full window with the recovered b_n filled in.
  InterlacingPairs pairs;
  /// m(0) of the reconstructed function.
  double value_at_zero;
  /// Herglotz factor carrying the poles with given masses. It equals
  /// orientation * f where m = f g and g is the product over known pairs.
  HerglotzForm factor;
  /// Sign of g at the hidden poles (+1 unless a known pair straddles 0).
  int orientation;
  /// Recovered b_n for the indices that had masses.
  std::map<int, double> recovered_second;
  /// Caveat from the bounded-below path with an l or p constant.
  bool conditional = false;

  HerglotzProductForm form() const { return HerglotzProductForm(value_at_zero, pairs); }
};

/// Reconstructs from spectrum, masses on A, second spectrum off A and one
/// constant (the p constant is the product over A only). Recovered b_n are
/// checked against the gaps of the full spectrum.
MixedReconstruction mixed_reconstruct(const SpectralDataset& dataset);

}  // namespace mif
