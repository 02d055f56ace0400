#include "mif/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "mif/errors.hpp"

namespace mif {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

void require_strictly_increasing(std::span<const double> xs, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require_finite(xs[i], what);
    if (i > 0 && !(xs[i - 1] < xs[i])) {
      throw DomainError(std::string(what) + " must be strictly increasing (position " +
                        std::to_string(i) + ")");
    }
  }
}

void require_positive_masses(std::span<const double> masses, std::size_t expected) {
  if (masses.size() != expected) {
    throw DomainError("masses and support have different lengths");
  }
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] > 0.0) || !std::isfinite(masses[i])) {
      throw DomainError("mass at position " + std::to_string(i) + " must be positive and finite");
    }
  }
}

}  // namespace

// --- InterlacingPairs -------------------------------------------------------

InterlacingPairs::InterlacingPairs(Indexing indexing, int first_index, std::vector<double> poles,
                                   std::vector<double> zeros)
    : indexing_(indexing),
      first_index_(first_index),
      poles_(std::move(poles)),
      zeros_(std::move(zeros)) {
  if (poles_.size() != zeros_.size()) {
    throw DomainError("interlacing pairs need as many zeros as poles");
  }
  if (indexing_ == Indexing::BoundedBelow && first_index_ != 1) {
    throw DomainError("bounded-below windows start at index 1");
  }
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    const int index = first_index_ + static_cast<int>(i);
    const double a = poles_[i];
    const double b = zeros_[i];
    require_finite(a, "pole");
    require_finite(b, "zero");
    if (a == 0.0 || b == 0.0) {
      throw DomainError("pair " + std::to_string(index) +
                        " has a pole or zero at 0; shift the spectral parameter");
    }
    if (!(a < b)) {
      throw DomainError("pair " + std::to_string(index) + " violates a_n < b_n");
    }
    if (i + 1 < poles_.size() && !(b < poles_[i + 1])) {
      throw DomainError("pair " + std::to_string(index) + " violates b_n < a_{n+1}");
    }
  }
}

InterlacingPairs InterlacingPairs::anchored(Indexing indexing, std::vector<double> poles,
                                            std::vector<double> zeros) {
  if (indexing == Indexing::BoundedBelow) {
    return InterlacingPairs(indexing, 1, std::move(poles), std::move(zeros));
  }
  const auto first_nonnegative = std::lower_bound(poles.begin(), poles.end(), 0.0);
  const int first = -static_cast<int>(std::distance(poles.begin(), first_nonnegative));
  return InterlacingPairs(indexing, first, std::move(poles), std::move(zeros));
}

int InterlacingPairs::straddle_count() const {
  int count = 0;
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    if (poles_[i] < 0.0 && zeros_[i] > 0.0) ++count;
  }
  return count;
}

// --- forms ------------------------------------------------------------------

HerglotzProductForm::HerglotzProductForm(double c, InterlacingPairs pairs)
    : c_(c), pairs_(std::move(pairs)) {
  require_finite(c_, "c");
  if (c_ == 0.0) throw DomainError("c = m(0) must be nonzero");
  const bool negative_branch = pairs_.straddle_count() % 2 == 1;
  if (negative_branch ? !(c_ < 0.0) : !(c_ > 0.0)) {
    throw DomainError(negative_branch
                          ? "an interval (a_n, b_n) contains 0, so c = m(0) must be negative"
                          : "c = m(0) must be positive");
  }
  order_.resize(pairs_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  const auto poles = pairs_.poles();
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(poles[i]) < std::abs(poles[j]);
  });
}

ClarkMeasure::ClarkMeasure(std::vector<double> support, std::vector<double> masses,
                           double mass_at_infinity)
    : support_(std::move(support)), masses_(std::move(masses)), mass_at_infinity_(mass_at_infinity) {
  require_strictly_increasing(support_, "support");
  require_positive_masses(masses_, support_.size());
  require_finite(mass_at_infinity_, "mass at infinity");
  if (mass_at_infinity_ < 0.0) throw DomainError("mass at infinity must be nonnegative");
  if (!std::isfinite(poisson_sum())) throw DomainError("measure is not Poisson-finite");
}

double ClarkMeasure::poisson_sum() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    sum += masses_[i] / (1.0 + support_[i] * support_[i]);
  }
  return sum;
}

HerglotzSumForm::HerglotzSumForm(double offset, ClarkMeasure measure)
    : offset_(offset), measure_(std::move(measure)) {
  require_finite(offset_, "offset");
}

HerglotzSumForm::HerglotzSumForm(double slope, double offset, std::vector<double> support,
                                 std::vector<double> masses)
    : offset_(offset) {
  require_finite(slope, "slope");
  if (slope < 0.0) throw DomainError("slope at infinity must be nonnegative");
  require_finite(offset_, "offset");
  measure_ = ClarkMeasure(std::move(support), std::move(masses), kPi * slope);
}

double HerglotzSumForm::slope_at_infinity() const { return measure_.mass_at_infinity() / kPi; }

PoleExpansionForm::PoleExpansionForm(double limit, std::vector<double> poles,
                                     std::vector<double> masses)
    : limit_(limit), poles_(std::move(poles)), masses_(std::move(masses)) {
  require_finite(limit_, "L");
  require_strictly_increasing(poles_, "poles");
  require_positive_masses(masses_, poles_.size());
}

// --- evaluation -------------------------------------------------------------

namespace {

complex pair_factor(double a, double b, complex z) { return (a * (z - b)) / (b * (z - a)); }

}  // namespace

complex eval_product(const HerglotzProductForm& form, complex z) {
  const auto& pairs = form.pairs();
  const auto poles = pairs.poles();
  const auto zeros = pairs.zeros();
  complex value = form.c();
  for (const std::size_t i : form.evaluation_order()) {
    if (z == complex(poles[i], 0.0)) {
      throw DomainError("evaluation at the pole a_" + std::to_string(pairs[i].index));
    }
    value *= pair_factor(poles[i], zeros[i], z);
  }
  return value;
}

complex pair_product(std::span<const double> poles, std::span<const double> zeros, complex z) {
  if (poles.size() != zeros.size()) throw DomainError("pair_product: size mismatch");
  std::vector<std::size_t> order(poles.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(poles[i]) < std::abs(poles[j]);
  });
  complex value = 1.0;
  for (const std::size_t i : order) {
    if (z == complex(poles[i], 0.0)) {
      throw DomainError("pair_product: evaluation at a pole (position " + std::to_string(i) + ")");
    }
    value *= pair_factor(poles[i], zeros[i], z);
  }
  return value;
}

complex eval_sum(const HerglotzSumForm& form, complex z) {
  const auto& measure = form.measure();
  const auto support = measure.support();
  const auto masses = measure.masses();
  complex sum = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    const double t = support[k];
    if (z == complex(t, 0.0)) {
      throw DomainError("evaluation at support point " + std::to_string(k));
    }
    sum += masses[k] * (1.0 / (t - z) - t / (1.0 + t * t));
  }
  return form.slope_at_infinity() * z + form.offset() + sum / kPi;
}

complex eval_pole_expansion(const PoleExpansionForm& form, complex z) {
  const auto poles = form.poles();
  const auto masses = form.masses();
  complex sum = 0.0;
  for (std::size_t k = 0; k < poles.size(); ++k) {
    if (z == complex(poles[k], 0.0)) {
      throw DomainError("evaluation at pole " + std::to_string(k));
    }
    sum += masses[k] / (poles[k] - z);
  }
  return form.limit() + sum / kPi;
}

complex evaluate(const HerglotzForm& form, complex z) {
  return std::visit(
      [z](const auto& f) -> complex {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, HerglotzProductForm>) {
          return eval_product(f, z);
        } else if constexpr (std::is_same_v<T, HerglotzSumForm>) {
          return eval_sum(f, z);
        } else {
          return eval_pole_expansion(f, z);
        }
      },
      form);
}

// --- Cayley -----------------------------------------------------------------

complex cayley_inner(complex m_value) {
  const complex i(0.0, 1.0);
  if (m_value + i == complex(0.0)) throw DomainError("cayley_inner is undefined at m = -i");
  return (m_value - i) / (m_value + i);
}

complex cayley_herglotz(complex theta_value) {
  const complex i(0.0, 1.0);
  if (1.0 - theta_value == complex(0.0)) {
    throw DomainError("cayley_herglotz is undefined at Theta = 1");
  }
  return i * (1.0 + theta_value) / (1.0 - theta_value);
}

complex inner_limit_from(double herglotz_limit) {
  require_finite(herglotz_limit, "L");
  return cayley_inner(complex(herglotz_limit, 0.0));
}

double herglotz_limit_from(complex inner_limit) {
  if (std::abs(std::abs(inner_limit) - 1.0) > 1e-12) {
    throw DomainError("l must be unimodular");
  }
  if (std::abs(1.0 - inner_limit) <= 4.0 * std::numeric_limits<double>::epsilon()) {
    throw IllPosedError("l = 1: the Clark measure has mass at infinity and L is infinite");
  }
  // i(1+l)/(1-l) is real for unimodular l; drop the rounding residue.
  return cayley_herglotz(inner_limit).real();
}

// --- conversions ------------------------------------------------------------

LimitAtInfinity limit_at_infinity(const HerglotzProductForm& form) {
  const auto poles = form.pairs().poles();
  const auto zeros = form.pairs().zeros();
  double product = 1.0;
  for (const std::size_t i : form.evaluation_order()) product *= poles[i] / zeros[i];
  return {form.c() * product, product};
}

double residue_at_pole(const HerglotzProductForm& form, std::size_t k) {
  const auto poles = form.pairs().poles();
  const auto zeros = form.pairs().zeros();
  const double ak = poles[k];
  const double bk = zeros[k];
  // Res of (z/b - 1)/(z/a - 1) at z = a is a(a - b)/b.
  double value = form.c() * ak * (ak - bk) / bk;
  for (const std::size_t n : form.evaluation_order()) {
    if (n == k) continue;
    value *= (ak / zeros[n] - 1.0) / (ak / poles[n] - 1.0);
  }
  return value;
}

PoleExpansionForm product_to_expansion(const HerglotzProductForm& form) {
  const auto& pairs = form.pairs();
  std::vector<double> poles(pairs.poles().begin(), pairs.poles().end());
  std::vector<double> masses(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    masses[k] = -kPi * residue_at_pole(form, k);
  }
  return PoleExpansionForm(limit_at_infinity(form).limit, std::move(poles), std::move(masses));
}

HerglotzSumForm expansion_to_sum(const PoleExpansionForm& form) {
  double shift = 0.0;
  const auto poles = form.poles();
  const auto masses = form.masses();
  for (std::size_t k = 0; k < poles.size(); ++k) {
    shift += masses[k] * poles[k] / (1.0 + poles[k] * poles[k]);
  }
  return HerglotzSumForm(
      form.limit() + shift / kPi,
      ClarkMeasure({poles.begin(), poles.end()}, {masses.begin(), masses.end()}, 0.0));
}

PoleExpansionForm sum_to_expansion(const HerglotzSumForm& form) {
  if (form.slope_at_infinity() != 0.0) {
    throw IllPosedError("sum form has mass at infinity; no finite limit L");
  }
  const auto support = form.measure().support();
  const auto masses = form.measure().masses();
  double shift = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    shift += masses[k] * support[k] / (1.0 + support[k] * support[k]);
  }
  return PoleExpansionForm(form.offset() - shift / kPi, {support.begin(), support.end()},
                           {masses.begin(), masses.end()});
}

// --- diagnostics ------------------------------------------------------------

ShortIntervalSums short_interval_sums(const InterlacingPairs& pairs) {
  ShortIntervalSums sums{0.0, 0.0};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double a = pairs.poles()[i];
    const double b = pairs.zeros()[i];
    const double length = b - a;
    const double dist = (a <= 0.0 && b >= 0.0) ? 0.0 : std::min(std::abs(a), std::abs(b));
    sums.l1 += length / (1.0 + dist);
    sums.l2 += length * length / (1.0 + dist * dist);
  }
  return sums;
}

double short_interval_sum(const InterlacingPairs& pairs) { return short_interval_sums(pairs).l1; }

}  // namespace mif
