#pragma once

// Meromorphic Herglotz functions in three interchangeable representations:
//
//   product        m(z) = c * prod_n (z/b_n - 1) / (z/a_n - 1)
//   Herglotz sum   m(z) = s*z + d + (1/pi) sum_k mu_k (1/(t_k - z) - t_k/(1 + t_k^2))
//   pole expansion m(z) = L + (1/pi) sum_k mu_k / (t_k - z)
//
// plus the Cayley transform between Herglotz values and inner-function values.
// Infinite sequences are represented by finite contiguous index windows.

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace mif {

using complex = std::complex<double>;

enum class Indexing { TwoSided, BoundedBelow };

/// One interlacing pair: a pole a_n followed by the zero b_n.
struct PolePair {
  int index;
  double pole;
  double zero;
};

/// Finite window of two interlacing sequences a_n < b_n < a_{n+1}.
///
/// Neither sequence may contain 0. Indices are contiguous; bounded-below
/// windows start at index 1.
class InterlacingPairs {
 public:
  InterlacingPairs() = default;
  InterlacingPairs(Indexing indexing, int first_index, std::vector<double> poles,
                   std::vector<double> zeros);

  /// Builds a window with the default index anchoring: index 1 for the first
  /// pair of a bounded-below window, index 0 for the smallest nonnegative pole
  /// of a two-sided window.
  static InterlacingPairs anchored(Indexing indexing, std::vector<double> poles,
                                   std::vector<double> zeros);

  Indexing indexing() const { return indexing_; }
  int first_index() const { return first_index_; }
  int last_index() const { return first_index_ + static_cast<int>(poles_.size()) - 1; }
  std::size_t size() const { return poles_.size(); }
  bool empty() const { return poles_.empty(); }

  std::span<const double> poles() const { return poles_; }
  std::span<const double> zeros() const { return zeros_; }
  PolePair operator[](std::size_t i) const {
    return {first_index_ + static_cast<int>(i), poles_[i], zeros_[i]};
  }

  /// Number of pairs whose open interval (a_n, b_n) contains 0 (at most one).
  int straddle_count() const;

 private:
  Indexing indexing_ = Indexing::TwoSided;
  int first_index_ = 0;
  std::vector<double> poles_;
  std::vector<double> zeros_;
};

/// m(z) = c * prod (z/b_n - 1)(z/a_n - 1)^{-1}, with c = m(0).
///
/// c is positive unless one stored interval (a_n, b_n) contains 0, in which
/// case m(0) lies on a negative branch and c must be negative. Either way the
/// stored function is Herglotz.
class HerglotzProductForm {
 public:
  HerglotzProductForm(double c, InterlacingPairs pairs);

  double c() const { return c_; }
  const InterlacingPairs& pairs() const { return pairs_; }

  /// Storage positions ordered by increasing |a_n|; factors are multiplied in
  /// this order.
  std::span<const std::size_t> evaluation_order() const { return order_; }

 private:
  double c_;
  InterlacingPairs pairs_;
  std::vector<std::size_t> order_;
};

/// Purely atomic Clark measure with an optional point mass at infinity.
class ClarkMeasure {
 public:
  ClarkMeasure() = default;
  ClarkMeasure(std::vector<double> support, std::vector<double> masses,
               double mass_at_infinity = 0.0);

  std::span<const double> support() const { return support_; }
  std::span<const double> masses() const { return masses_; }
  double mass_at_infinity() const { return mass_at_infinity_; }
  std::size_t size() const { return support_.size(); }

  /// sum mu_k / (1 + t_k^2); finite for every stored measure.
  double poisson_sum() const;

 private:
  std::vector<double> support_;
  std::vector<double> masses_;
  double mass_at_infinity_ = 0.0;
};

/// m(z) = s z + d + (1/pi) sum mu_k (1/(t_k - z) - t_k/(1+t_k^2)).
/// The slope s is pi^{-1} times the measure's mass at infinity.
class HerglotzSumForm {
 public:
  HerglotzSumForm(double offset, ClarkMeasure measure);
  HerglotzSumForm(double slope, double offset, std::vector<double> support,
                  std::vector<double> masses);

  double slope_at_infinity() const;
  double offset() const { return offset_; }
  const ClarkMeasure& measure() const { return measure_; }

 private:
  double offset_;
  ClarkMeasure measure_;
};

/// m(z) = L + (1/pi) sum mu_k / (t_k - z), L = lim m(iy).
class PoleExpansionForm {
 public:
  explicit PoleExpansionForm(double limit, std::vector<double> poles = {},
                             std::vector<double> masses = {});

  double limit() const { return limit_; }
  std::span<const double> poles() const { return poles_; }
  std::span<const double> masses() const { return masses_; }
  std::size_t size() const { return poles_.size(); }

 private:
  double limit_;
  std::vector<double> poles_;
  std::vector<double> masses_;
};

using HerglotzForm = std::variant<HerglotzProductForm, HerglotzSumForm, PoleExpansionForm>;

complex eval_product(const HerglotzProductForm& form, complex z);
complex eval_sum(const HerglotzSumForm& form, complex z);
complex eval_pole_expansion(const PoleExpansionForm& form, complex z);
complex evaluate(const HerglotzForm& form, complex z);

/// Product of pair factors a(z - b) / (b(z - a)) over arbitrary pairs, without
/// any interlacing requirement. Used for partial products such as the known
/// part of a mixed dataset.
complex pair_product(std::span<const double> poles, std::span<const double> zeros, complex z);

/// Theta = (m - i)/(m + i).
complex cayley_inner(complex m_value);
/// m = i (1 + Theta)/(1 - Theta).
complex cayley_herglotz(complex theta_value);

struct LimitAtInfinity {
  double limit;    ///< L = c * p
  double product;  ///< p = prod a_n / b_n
};

LimitAtInfinity limit_at_infinity(const HerglotzProductForm& form);

/// Residue of the product form at the stored pole a_k (storage position k),
/// from the explicit partial-product formula.
double residue_at_pole(const HerglotzProductForm& form, std::size_t k);

/// Masses mu(a_k) = -pi Res(m, a_k) and L = c prod a/b.
PoleExpansionForm product_to_expansion(const HerglotzProductForm& form);
HerglotzSumForm expansion_to_sum(const PoleExpansionForm& form);
/// Requires slope 0 (no mass at infinity).
PoleExpansionForm sum_to_expansion(const HerglotzSumForm& form);

/// l = (L - i)/(L + i), the limit of Theta(iy).
complex inner_limit_from(double herglotz_limit);
/// Inverse of inner_limit_from. Throws IllPosedError for l = 1 (mass at
/// infinity) and DomainError when |l| != 1.
double herglotz_limit_from(complex inner_limit);

/// Partial sums of the interval conditions over the stored pairs.
struct ShortIntervalSums {
  double l1;  ///< sum |I_n| / (1 + dist(0, I_n))
  double l2;  ///< sum |I_n|^2 / (1 + dist(0, I_n)^2)
};

ShortIntervalSums short_interval_sums(const InterlacingPairs& pairs);
double short_interval_sum(const InterlacingPairs& pairs);

}  // namespace mif
