#include "mif/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mif/clark.hpp"
#include "mif/errors.hpp"

namespace mif {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string index_label(int index) { return "index " + std::to_string(index); }

std::vector<double> ordered_masses(const SpectralDataset& dataset) {
  std::vector<double> masses;
  masses.reserve(dataset.spectrum.size());
  for (int n = dataset.first_index; n <= dataset.last_index(); ++n) {
    masses.push_back(dataset.masses.at(n));
  }
  return masses;
}

// (1/pi) sum mu_k / a_k
double reciprocal_moment(std::span<const double> spectrum, std::span<const double> masses) {
  double sum = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    if (spectrum[k] == 0.0) {
      throw DomainError("spectrum contains 0; shift the spectral parameter");
    }
    sum += masses[k] / spectrum[k];
  }
  return sum / kPi;
}

}  // namespace

void validate_constant(const ConstantSpec& constant) {
  std::visit(overloaded{
                 [](const InnerLimit& l) { (void)herglotz_limit_from(l.value); },
                 [](const ValueAtZero& c) {
                   if (!std::isfinite(c.value) || c.value == 0.0) {
                     throw DomainError("constant c = m(0) must be finite and nonzero");
                   }
                 },
                 [](const PoleZeroRatio& p) {
                   if (!std::isfinite(p.value)) throw DomainError("constant p must be finite");
                   if (p.value == 1.0) {
                     throw IllPosedError("constant p = 1 does not determine L");
                   }
                 },
             },
             constant);
}

char constant_kind(const ConstantSpec& constant) {
  return std::visit(overloaded{[](const InnerLimit&) { return 'l'; },
                               [](const ValueAtZero&) { return 'c'; },
                               [](const PoleZeroRatio&) { return 'p'; }},
                    constant);
}

void SpectralDataset::validate() const {
  if (mode == Indexing::BoundedBelow && first_index != 1) {
    throw DomainError("bounded-below datasets start at index 1");
  }
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (!std::isfinite(spectrum[i])) throw DomainError("spectrum entries must be finite");
    if (spectrum[i] == 0.0) {
      throw DomainError("spectrum contains 0; shift the spectral parameter");
    }
    if (i > 0 && !(spectrum[i - 1] < spectrum[i])) {
      throw DomainError("spectrum must be strictly increasing");
    }
  }
  for (const auto& [index, mass] : masses) {
    if (index < first_index || index > last_index()) {
      throw DomainError("mass given for " + index_label(index) + " outside the window");
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw DomainError("mass at " + index_label(index) + " must be positive");
    }
  }
  for (const auto& [index, b] : known_second) {
    if (index < first_index || index > last_index()) {
      throw DomainError("second-spectrum point given for " + index_label(index) +
                        " outside the window");
    }
    if (masses.count(index) != 0) {
      throw DomainError(index_label(index) + " has both a mass and a second-spectrum point");
    }
    const double a = pole(index);
    const bool has_next = index < last_index();
    if (!(b > a) || (has_next && !(b < pole(index + 1))) || b == 0.0) {
      throw DomainError("second-spectrum point at " + index_label(index) +
                        " lies outside (a_n, a_{n+1}) or at 0");
    }
  }
  if (masses.size() + known_second.size() != spectrum.size()) {
    throw DomainError("masses and second-spectrum points must cover the whole index window");
  }
  validate_constant(constant);
}

SpectralDataset dataset_from_product(const HerglotzProductForm& form, ConstantSpec constant) {
  const auto expansion = product_to_expansion(form);
  SpectralDataset dataset;
  dataset.mode = form.pairs().indexing();
  dataset.first_index = form.pairs().first_index();
  dataset.spectrum.assign(expansion.poles().begin(), expansion.poles().end());
  for (std::size_t k = 0; k < expansion.size(); ++k) {
    dataset.masses[dataset.first_index + static_cast<int>(k)] = expansion.masses()[k];
  }
  dataset.constant = constant;
  return dataset;
}

SpectralDataset bounded_below_dataset(const HerglotzSumForm& form) {
  if (form.slope_at_infinity() != 0.0) {
    throw IllPosedError(
        "sum form has mass at infinity (positive slope); it is not determined by bounded-below "
        "spectral data");
  }
  SpectralDataset dataset;
  dataset.mode = Indexing::BoundedBelow;
  dataset.first_index = 1;
  const auto support = form.measure().support();
  const auto masses = form.measure().masses();
  dataset.spectrum.assign(support.begin(), support.end());
  for (std::size_t k = 0; k < support.size(); ++k) {
    dataset.masses[1 + static_cast<int>(k)] = masses[k];
  }
  dataset.constant = ValueAtZero{eval_sum(form, 0.0).real()};
  return dataset;
}

double determine_limit(std::span<const double> spectrum, std::span<const double> masses,
                       const ConstantSpec& constant) {
  if (spectrum.size() != masses.size()) {
    throw DomainError("determine_limit: spectrum and masses differ in length");
  }
  validate_constant(constant);
  return std::visit(
      overloaded{
          [](const InnerLimit& l) { return herglotz_limit_from(l.value); },
          [&](const ValueAtZero& c) { return c.value - reciprocal_moment(spectrum, masses); },
          [&](const PoleZeroRatio& p) {
            // L = c p together with c = L + S.
            const double s = reciprocal_moment(spectrum, masses);
            return p.value * s / (1.0 - p.value);
          },
      },
      constant);
}

PoleExpansionForm reconstruct_full(const SpectralDataset& dataset) {
  dataset.validate();
  if (!dataset.has_full_masses()) {
    throw DomainError("reconstruct_full needs a mass for every spectrum point");
  }
  auto masses = ordered_masses(dataset);
  const double limit = determine_limit(dataset.spectrum, masses, dataset.constant);
  return PoleExpansionForm(limit, dataset.spectrum, std::move(masses));
}

HerglotzSumForm reconstruct_bounded_below(const SpectralDataset& dataset, double c) {
  if (dataset.mode != Indexing::BoundedBelow) {
    throw DomainError("reconstruct_bounded_below needs a bounded-below dataset");
  }
  dataset.validate();
  if (!dataset.has_full_masses()) {
    throw DomainError("reconstruct_bounded_below needs a mass for every spectrum point");
  }
  validate_constant(ValueAtZero{c});
  for (const double a : dataset.spectrum) {
    if (!(a > 0.0)) {
      throw DomainError("bounded-below reconstruction needs a positive spectrum; substitute z - d "
                        "for z with d > |a_1|");
    }
  }
  auto masses = ordered_masses(dataset);
  double correction = 0.0;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    const double a = dataset.spectrum[k];
    correction += masses[k] / (a + a * a * a);
  }
  return HerglotzSumForm(0.0, c - correction / kPi, dataset.spectrum, std::move(masses));
}

BoundedBelowReconstruction reconstruct_bounded_below(const SpectralDataset& dataset) {
  if (const auto* c = std::get_if<ValueAtZero>(&dataset.constant)) {
    return {reconstruct_bounded_below(dataset, c->value), false};
  }
  if (dataset.mode != Indexing::BoundedBelow) {
    throw DomainError("reconstruct_bounded_below needs a bounded-below dataset");
  }
  return {expansion_to_sum(reconstruct_full(dataset)), true};
}

MixedReconstruction mixed_reconstruct(const SpectralDataset& dataset) {
  dataset.validate();

  std::vector<double> known_poles, known_zeros;
  std::vector<int> hidden;
  for (int n = dataset.first_index; n <= dataset.last_index(); ++n) {
    if (const auto it = dataset.known_second.find(n); it != dataset.known_second.end()) {
      known_poles.push_back(dataset.pole(n));
      known_zeros.push_back(it->second);
    } else {
      hidden.push_back(n);
    }
  }

  double known_ratio = 1.0;
  for (std::size_t i = 0; i < known_poles.size(); ++i) known_ratio *= known_poles[i] / known_zeros[i];
  const int orientation = known_ratio > 0.0 ? 1 : -1;

  MixedReconstruction result{InterlacingPairs{}, 0.0, PoleExpansionForm(0.0), orientation, {}, false};

  if (hidden.empty()) {
    const double c = std::visit(
        overloaded{
            [](const ValueAtZero& c0) { return c0.value; },
            [&](const InnerLimit& l) { return herglotz_limit_from(l.value) / known_ratio; },
            [](const PoleZeroRatio&) -> double {
              throw IllPosedError("p over an empty index set equals 1 and does not determine m");
            },
        },
        dataset.constant);
    result.pairs = InterlacingPairs(dataset.mode, dataset.first_index, dataset.spectrum, known_zeros);
    result.value_at_zero = c;
    result.factor = PoleExpansionForm(orientation * c);
    return result;
  }

  // Factor f' = orientation * m / g carries the hidden poles; its masses are
  // mu_k / |g(a_k)| because Res(f, a_k) = Res(m, a_k) / g(a_k).
  std::vector<double> factor_poles, factor_masses;
  for (const int k : hidden) {
    const double a = dataset.pole(k);
    const double g = pair_product(known_poles, known_zeros, a).real();
    if (g == 0.0 || !std::isfinite(g) || (g > 0.0 ? 1 : -1) != orientation) {
      throw NumericalFailure("internal invariant violated: g(a_" + std::to_string(k) +
                             ") = " + std::to_string(g));
    }
    factor_poles.push_back(a);
    factor_masses.push_back(dataset.masses.at(k) / std::abs(g));
  }

  SpectralDataset factor_data;
  factor_data.mode = Indexing::TwoSided;
  factor_data.first_index = 0;
  factor_data.spectrum = factor_poles;
  for (std::size_t i = 0; i < factor_masses.size(); ++i) {
    factor_data.masses[static_cast<int>(i)] = factor_masses[i];
  }
  factor_data.constant = std::visit(
      overloaded{
          [&](const ValueAtZero& c) -> ConstantSpec { return ValueAtZero{orientation * c.value}; },
          [&](const InnerLimit& l) -> ConstantSpec {
            return InnerLimit{inner_limit_from(herglotz_limit_from(l.value) / std::abs(known_ratio))};
          },
          [](const PoleZeroRatio& p) -> ConstantSpec { return p; },
      },
      dataset.constant);

  if (dataset.mode == Indexing::BoundedBelow) {
    factor_data.mode = Indexing::BoundedBelow;
    factor_data.first_index = 1;
    std::map<int, double> shifted;
    for (const auto& [i, mu] : factor_data.masses) shifted[i + 1] = mu;
    factor_data.masses = std::move(shifted);
    auto bounded = reconstruct_bounded_below(factor_data);
    result.factor = std::move(bounded.form);
    result.conditional = bounded.conditional;
  } else {
    result.factor = reconstruct_full(factor_data);
  }

  const auto zeros = second_spectrum(result.factor);
  if (zeros.size() != hidden.size()) {
    throw InconsistentDataError("factor has " + std::to_string(zeros.size()) + " real zeros for " +
                                std::to_string(hidden.size()) + " hidden poles");
  }

  std::vector<double> full_zeros(dataset.spectrum.size());
  for (std::size_t i = 0; i < known_poles.size(); ++i) {
    const auto pos = std::lower_bound(dataset.spectrum.begin(), dataset.spectrum.end(), known_poles[i]);
    full_zeros[static_cast<std::size_t>(pos - dataset.spectrum.begin())] = known_zeros[i];
  }
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    const int k = hidden[i];
    const double b = zeros[i];
    const double a = dataset.pole(k);
    const bool has_next = k < dataset.last_index();
    if (!(b > a) || (has_next && !(b < dataset.pole(k + 1)))) {
      throw InconsistentDataError("recovered b_" + std::to_string(k) + " = " + std::to_string(b) +
                                  " escapes its gap (a_n, a_{n+1})");
    }
    full_zeros[static_cast<std::size_t>(k - dataset.first_index)] = b;
    result.recovered_second[k] = b;
  }

  result.pairs = InterlacingPairs(dataset.mode, dataset.first_index, dataset.spectrum, full_zeros);
  result.value_at_zero = std::visit(
      overloaded{
          [](const ValueAtZero& c) { return c.value; },
          [&](const auto&) { return orientation * evaluate(result.factor, 0.0).real(); },
      },
      dataset.constant);
  return result;
}

}  // namespace mif
