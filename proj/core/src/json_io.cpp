#include "mif/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string_view>

namespace mif::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string child(const std::string& pointer, std::string_view key) {
  return pointer + "/" + std::string(key);
}
std::string child(const std::string& pointer, std::size_t index) {
  return pointer + "/" + std::to_string(index);
}

const json& field(const json& j, const std::string& pointer, const char* key) {
  if (!j.is_object()) throw ValidationError(pointer, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(child(pointer, key), "missing field");
  return *it;
}

const json* optional_field(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double real(const json& j, const std::string& pointer) {
  double value = 0.0;
  if (j.is_number()) {
    value = j.get<double>();
  } else if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw ValidationError(pointer, "not a decimal number: \"" + s + "\"");
    }
  } else {
    throw ValidationError(pointer, "expected a number");
  }
  if (!std::isfinite(value)) throw ValidationError(pointer, "number must be finite");
  return value;
}

int integer(const json& j, const std::string& pointer) {
  if (!j.is_number_integer()) throw ValidationError(pointer, "expected an integer");
  return j.get<int>();
}

std::vector<double> reals(const json& j, const std::string& pointer) {
  if (!j.is_array()) throw ValidationError(pointer, "expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(real(j[i], child(pointer, i)));
  return out;
}

std::map<int, double> index_map(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw ValidationError(pointer, "expected an object keyed by index");
  std::map<int, double> out;
  for (const auto& [key, value] : j.items()) {
    int index = 0;
    const auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
    if (ec != std::errc() || end != key.data() + key.size()) {
      throw ValidationError(child(pointer, key), "key is not an integer index");
    }
    out[index] = real(value, child(pointer, key));
  }
  return out;
}

json index_map_json(const std::map<int, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

const char* indexing_name(Indexing indexing) {
  return indexing == Indexing::BoundedBelow ? "bounded-below" : "two-sided";
}

Indexing indexing_from(const json& j, const std::string& pointer) {
  if (j == "two-sided") return Indexing::TwoSided;
  if (j == "bounded-below") return Indexing::BoundedBelow;
  throw ValidationError(pointer, "expected \"two-sided\" or \"bounded-below\"");
}

// Re-throws model errors raised while building an object as validation
// errors located at `pointer`.
template <typename Build>
auto located(const std::string& pointer, Build&& build) {
  try {
    return build();
  } catch (const ValidationError&) {
    throw;
  } catch (const DomainError& e) {
    throw ValidationError(pointer, e.what());
  }
}

}  // namespace

ValidationError::ValidationError(std::string pointer, const std::string& message)
    : DomainError((pointer.empty() ? std::string("/") : pointer) + ": " + message),
      pointer_(std::move(pointer)) {}

json to_json(complex value) { return json::array({value.real(), value.imag()}); }

complex complex_from_json(const json& j, const std::string& pointer) {
  if (j.is_array()) {
    if (j.size() != 2) throw ValidationError(pointer, "complex value must be [re, im]");
    return {real(j[0], child(pointer, 0)), real(j[1], child(pointer, 1))};
  }
  return {real(j, pointer), 0.0};
}

json to_json(const HerglotzForm& form) {
  return std::visit(
      overloaded{
          [](const HerglotzProductForm& f) {
            const auto& p = f.pairs();
            return json{{"kind", "product"},
                        {"c", f.c()},
                        {"indexing", indexing_name(p.indexing())},
                        {"firstIndex", p.first_index()},
                        {"a", std::vector<double>(p.poles().begin(), p.poles().end())},
                        {"b", std::vector<double>(p.zeros().begin(), p.zeros().end())}};
          },
          [](const HerglotzSumForm& f) {
            const auto& m = f.measure();
            return json{{"kind", "sum"},
                        {"slopeAtInfinity", f.slope_at_infinity()},
                        {"offset", f.offset()},
                        {"measure",
                         {{"support", std::vector<double>(m.support().begin(), m.support().end())},
                          {"masses", std::vector<double>(m.masses().begin(), m.masses().end())},
                          {"massAtInfinity", m.mass_at_infinity()}}}};
          },
          [](const PoleExpansionForm& f) {
            return json{{"kind", "pole-expansion"},
                        {"L", f.limit()},
                        {"poles", std::vector<double>(f.poles().begin(), f.poles().end())},
                        {"masses", std::vector<double>(f.masses().begin(), f.masses().end())}};
          },
      },
      form);
}

InterlacingPairs pairs_from_json(const json& j) {
  if (j.is_object() && j.contains("kind")) {
    const HerglotzForm form = form_from_json(j);
    if (const auto* p = std::get_if<HerglotzProductForm>(&form)) return p->pairs();
    throw ValidationError("/kind", "interval data needs a product form");
  }
  const auto a = reals(field(j, "", "a"), "/a");
  const auto b = reals(field(j, "", "b"), "/b");
  const Indexing indexing =
      optional_field(j, "indexing") ? indexing_from(j["indexing"], "/indexing") : Indexing::TwoSided;
  return located("", [&] {
    if (const json* first = optional_field(j, "firstIndex")) {
      return InterlacingPairs(indexing, integer(*first, "/firstIndex"), a, b);
    }
    return InterlacingPairs::anchored(indexing, a, b);
  });
}

json to_json(const InterlacingPairs& pairs) {
  return {{"indexing", indexing_name(pairs.indexing())},
          {"firstIndex", pairs.first_index()},
          {"a", std::vector<double>(pairs.poles().begin(), pairs.poles().end())},
          {"b", std::vector<double>(pairs.zeros().begin(), pairs.zeros().end())}};
}

HerglotzForm form_from_json(const json& j) {
  const json& kind = field(j, "", "kind");
  if (kind == "product") {
    const double c = real(field(j, "", "c"), "/c");
    const auto a = reals(field(j, "", "a"), "/a");
    const auto b = reals(field(j, "", "b"), "/b");
    const Indexing indexing = optional_field(j, "indexing")
                                  ? indexing_from(j["indexing"], "/indexing")
                                  : Indexing::TwoSided;
    return located("", [&]() -> HerglotzForm {
      InterlacingPairs pairs = optional_field(j, "firstIndex")
                                   ? InterlacingPairs(indexing, integer(j["firstIndex"], "/firstIndex"), a, b)
                                   : InterlacingPairs::anchored(indexing, a, b);
      return HerglotzProductForm(c, std::move(pairs));
    });
  }
  if (kind == "sum") {
    const double offset = real(field(j, "", "offset"), "/offset");
    const json& m = field(j, "", "measure");
    auto support = reals(field(m, "/measure", "support"), "/measure/support");
    auto masses = reals(field(m, "/measure", "masses"), "/measure/masses");
    double at_infinity = 0.0;
    if (const json* x = optional_field(m, "massAtInfinity")) {
      at_infinity = real(*x, "/measure/massAtInfinity");
    } else if (const json* s = optional_field(j, "slopeAtInfinity")) {
      at_infinity = std::numbers::pi * real(*s, "/slopeAtInfinity");
    }
    return located("/measure", [&]() -> HerglotzForm {
      return HerglotzSumForm(offset, ClarkMeasure(std::move(support), std::move(masses), at_infinity));
    });
  }
  if (kind == "pole-expansion") {
    const double limit = real(field(j, "", "L"), "/L");
    auto poles = reals(field(j, "", "poles"), "/poles");
    auto masses = reals(field(j, "", "masses"), "/masses");
    return located("", [&]() -> HerglotzForm {
      return PoleExpansionForm(limit, std::move(poles), std::move(masses));
    });
  }
  throw ValidationError("/kind", "expected \"product\", \"sum\" or \"pole-expansion\"");
}

json to_json(const ConstantSpec& constant) {
  return std::visit(overloaded{
                        [](const InnerLimit& l) { return json{{"kind", "l"}, {"value", to_json(l.value)}}; },
                        [](const ValueAtZero& c) { return json{{"kind", "c"}, {"value", c.value}}; },
                        [](const PoleZeroRatio& p) { return json{{"kind", "p"}, {"value", p.value}}; },
                    },
                    constant);
}

ConstantSpec constant_from_json(const json& j, const std::string& pointer) {
  const json& kind = field(j, pointer, "kind");
  const json& value = field(j, pointer, "value");
  const std::string vp = child(pointer, "value");
  ConstantSpec out;
  if (kind == "l") {
    out = InnerLimit{complex_from_json(value, vp)};
  } else if (kind == "c") {
    out = ValueAtZero{real(value, vp)};
  } else if (kind == "p") {
    out = PoleZeroRatio{real(value, vp)};
  } else {
    throw ValidationError(child(pointer, "kind"), "expected \"l\", \"c\" or \"p\"");
  }
  located(vp, [&] {
    validate_constant(out);
    return 0;
  });
  return out;
}

json to_json(const SpectralDataset& d) {
  return {{"mode", indexing_name(d.mode)},
          {"firstIndex", d.first_index},
          {"spectrum", d.spectrum},
          {"masses", index_map_json(d.masses)},
          {"knownSecond", index_map_json(d.known_second)},
          {"constant", to_json(d.constant)}};
}

SpectralDataset dataset_from_json(const json& j) {
  SpectralDataset d;
  d.mode = optional_field(j, "mode") ? indexing_from(j["mode"], "/mode") : Indexing::TwoSided;
  d.spectrum = reals(field(j, "", "spectrum"), "/spectrum");
  if (const json* first = optional_field(j, "firstIndex")) {
    d.first_index = integer(*first, "/firstIndex");
  } else if (d.mode == Indexing::BoundedBelow) {
    d.first_index = 1;
  } else {
    d.first_index = -static_cast<int>(
        std::count_if(d.spectrum.begin(), d.spectrum.end(), [](double a) { return a < 0.0; }));
  }
  if (const json* m = optional_field(j, "masses")) d.masses = index_map(*m, "/masses");
  if (const json* k = optional_field(j, "knownSecond")) d.known_second = index_map(*k, "/knownSecond");
  d.constant = constant_from_json(field(j, "", "constant"));
  located("", [&] {
    d.validate();
    return 0;
  });
  return d;
}

json to_json(const canonical::Hamiltonian& h) {
  json cells = json::array();
  for (const auto& c : h.cells()) cells.push_back({c.h11, c.h12, c.h22});
  return {{"L", h.length()},
          {"grid", std::vector<double>(h.grid().begin(), h.grid().end())},
          {"cells", cells}};
}

canonical::Hamiltonian hamiltonian_from_json(const json& j) {
  const double length = real(field(j, "", "L"), "/L");
  const json& cells_json = field(j, "", "cells");
  if (!cells_json.is_array()) throw ValidationError("/cells", "expected an array");
  std::vector<canonical::Cell> cells;
  for (std::size_t i = 0; i < cells_json.size(); ++i) {
    const auto entries = reals(cells_json[i], child("/cells", i));
    if (entries.size() != 3) {
      throw ValidationError(child("/cells", i), "cell must be [h11, h12, h22]");
    }
    cells.push_back({entries[0], entries[1], entries[2]});
  }
  if (const json* g = optional_field(j, "grid")) {
    auto grid = reals(*g, "/grid");
    if (!grid.empty() && grid.back() != length) {
      throw ValidationError("/grid", "last breakpoint must equal L");
    }
    return located("", [&] { return canonical::Hamiltonian(std::move(grid), std::move(cells)); });
  }
  return located("", [&] { return canonical::Hamiltonian::uniform(length, std::move(cells)); });
}

json to_json(const canonical::SpectralMeasure& m) {
  return {{"support", m.eigenvalues},
          {"normingConstants", m.norming_constants},
          {"masses", m.clark_masses()},
          {"boundary", {{"alpha", m.boundary.alpha}, {"beta", m.boundary.beta}}}};
}

canonical::SpectralMeasure measure_from_json(const json& j) {
  auto support = reals(field(j, "", "support"), "/support");
  auto gammas = reals(field(j, "", "normingConstants"), "/normingConstants");
  if (support.size() != gammas.size()) {
    throw ValidationError("/normingConstants", "length differs from /support");
  }
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0)) throw ValidationError(child("/normingConstants", i), "must be positive");
    if (i > 0 && !(support[i - 1] < support[i])) {
      throw ValidationError(child("/support", i), "support must be strictly increasing");
    }
  }
  const json& b = field(j, "", "boundary");
  const double alpha = real(field(b, "/boundary", "alpha"), "/boundary/alpha");
  const double beta = real(field(b, "/boundary", "beta"), "/boundary/beta");
  const auto boundary = located("/boundary", [&] { return canonical::BoundaryPair(alpha, beta); });
  return {std::move(support), std::move(gammas), boundary};
}

json to_json(const canonical::InverseProblem& p) {
  json out{{"alpha1", p.alpha1},
           {"beta", p.beta},
           {"firstIndex", p.first_index},
           {"spectrum", p.spectrum},
           {"normingConstants", index_map_json(p.norming_constants)},
           {"secondSpectrum", index_map_json(p.second_spectrum)}};
  if (p.alpha2) out["alpha2"] = *p.alpha2;
  return out;
}

json to_json(const canonical::PipelineReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"gridPoint", to_json(rec.grid_point)},
                       {"forward", to_json(rec.forward)},
                       {"reconstructed", to_json(rec.reconstructed)},
                       {"absError", rec.abs_error}});
  }
  return {{"path", canonical::path_name(r.path)},
          {"N", r.count},
          {"supError", r.sup_error},
          {"massAtInfinity", r.mass_at_infinity},
          {"recoveredSecond", index_map_json(r.recovered_second)},
          {"records", records}};
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace mif::io
