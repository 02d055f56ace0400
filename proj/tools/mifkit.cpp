// mifkit: batch front end for the mif library.
//
//   mifkit mif  eval|clark|zeros|reconstruct|mixed  [input]
//   mifkit cs   spectrum|measure|weyl|roundtrip|two-spectra  [input]
//   mifkit diag shortsum|herglotz-check  [input]
//
// Input is a JSON file path, or stdin when the path is omitted or "-".
// Exit codes: 0 success, 2 validation error, 3 numerical failure,
// 4 roundtrip error above --tolerance.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mif/canonical.hpp"
#include "mif/clark.hpp"
#include "mif/errors.hpp"
#include "mif/herglotz.hpp"
#include "mif/inverse_pipeline.hpp"
#include "mif/json_io.hpp"
#include "mif/reconstruct.hpp"

#ifndef MIFKIT_VERSION
#define MIFKIT_VERSION "unknown"
#endif

namespace {

using mif::complex;
using mif::io::json;
namespace cs = mif::canonical;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitTolerance = 4;

struct Options {
  std::string input = "-";
  std::string grid = "-0.5:0.5:10,0.5:1.5:10";
  std::string window;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> alpha2;
  std::optional<double> tolerance;
  std::size_t count = 0;
  std::vector<int> with_masses;
  std::size_t tail_factor = cs::PipelineOptions{}.tail_factor;
  bool extrapolate = false;
  std::string output = "json";
};

class ToleranceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mif::io::ValidationError("", "cannot open input file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json load(const Options& o) { return mif::io::parse(read_input(o.input)); }

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw mif::DomainError(what + ": not a number: \"" + text + "\"");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<double> axis(const std::string& spec) {
  const auto p = split(spec, ':');
  if (p.size() != 3) throw mif::DomainError("--grid axis must be start:stop:count, got \"" + spec + "\"");
  const double a = parse_real(p[0], "--grid"), b = parse_real(p[1], "--grid");
  const double n = parse_real(p[2], "--grid");
  if (n < 1 || n != std::floor(n) || n > 1e6) throw mif::DomainError("--grid count must be a positive integer");
  std::vector<double> out;
  const int count = static_cast<int>(n);
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  return out;
}

std::vector<complex> grid(const Options& o) {
  const auto parts = split(o.grid, ',');
  if (parts.size() != 2) throw mif::DomainError("--grid must be \"re0:re1:n,im0:im1:m\"");
  std::vector<complex> out;
  for (const double x : axis(parts[0])) {
    for (const double y : axis(parts[1])) out.emplace_back(x, y);
  }
  return out;
}

std::pair<double, double> window(const Options& o) {
  if (o.window.empty()) throw mif::DomainError("--window lo:hi is required");
  const auto p = split(o.window, ':');
  if (p.size() != 2) throw mif::DomainError("--window must be lo:hi");
  const double lo = parse_real(p[0], "--window"), hi = parse_real(p[1], "--window");
  if (!(lo < hi)) throw mif::DomainError("--window needs lo < hi");
  return {lo, hi};
}

double required(const std::optional<double>& v, const char* flag) {
  if (!v) throw mif::DomainError(std::string(flag) + " is required");
  return *v;
}

cs::BoundaryPair boundary(const Options& o) {
  return cs::BoundaryPair(required(o.alpha, "--alpha"), required(o.beta, "--beta"));
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

void print_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string line;
  for (std::size_t i = 0; i < header.size(); ++i) line += (i ? "," : "") + header[i];
  std::cout << line << '\n';
  for (const auto& row : rows) {
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) line += (i ? "," : "") + num(row[i]);
    std::cout << line << '\n';
  }
}

bool csv(const Options& o) { return o.output == "csv"; }

void emit_values(const Options& o, const char* column, const std::vector<double>& values) {
  if (csv(o)) {
    std::vector<std::vector<double>> rows;
    for (const double v : values) rows.push_back({v});
    print_csv({column}, rows);
  } else {
    print_json(values);
  }
}

template <typename F>
void emit_grid(const Options& o, const std::vector<complex>& points, F&& f) {
  std::vector<std::vector<double>> rows;
  json records = json::array();
  for (const complex z : points) {
    const complex v = f(z);
    rows.push_back({z.real(), z.imag(), v.real(), v.imag()});
    records.push_back({{"z", mif::io::to_json(z)}, {"m", mif::io::to_json(v)}});
  }
  if (csv(o)) {
    print_csv({"re", "im", "m_re", "m_im"}, rows);
  } else {
    print_json(records);
  }
}

// --- mif ---------------------------------------------------------------------

void mif_eval(const Options& o) {
  const auto form = mif::io::form_from_json(load(o));
  const auto points = grid(o);
  emit_grid(o, points, [&](complex z) { return mif::evaluate(form, z); });
}

mif::PoleExpansionForm as_expansion(const mif::HerglotzForm& form) {
  if (const auto* p = std::get_if<mif::HerglotzProductForm>(&form)) return mif::product_to_expansion(*p);
  if (const auto* s = std::get_if<mif::HerglotzSumForm>(&form)) return mif::sum_to_expansion(*s);
  return std::get<mif::PoleExpansionForm>(form);
}

void mif_clark(const Options& o) {
  const auto form = mif::io::form_from_json(load(o));
  std::vector<double> poles, masses;
  json limit = nullptr;
  double at_infinity = 0.0;
  if (const auto* sum = std::get_if<mif::HerglotzSumForm>(&form)) {
    const auto& m = sum->measure();
    poles.assign(m.support().begin(), m.support().end());
    masses.assign(m.masses().begin(), m.masses().end());
    at_infinity = m.mass_at_infinity();
    if (at_infinity == 0.0) limit = mif::sum_to_expansion(*sum).limit();
  } else {
    const auto e = as_expansion(form);
    poles.assign(e.poles().begin(), e.poles().end());
    masses.assign(e.masses().begin(), e.masses().end());
    limit = e.limit();
  }
  const auto derivatives = mif::derivatives_from_masses(masses);
  if (csv(o)) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < poles.size(); ++k) rows.push_back({poles[k], masses[k], derivatives[k]});
    print_csv({"support", "mass", "derivative"}, rows);
    return;
  }
  print_json({{"L", limit},
              {"support", poles},
              {"masses", masses},
              {"derivatives", derivatives},
              {"massAtInfinity", at_infinity}});
}

void mif_zeros(const Options& o) {
  emit_values(o, "zero", mif::second_spectrum(mif::io::form_from_json(load(o))));
}

void mif_reconstruct(const Options& o) {
  const auto d = mif::io::dataset_from_json(load(o));
  if (!d.known_second.empty()) {
    throw mif::DomainError("dataset has knownSecond entries; use `mif mixed`");
  }
  if (d.mode == mif::Indexing::BoundedBelow) {
    const auto r = mif::reconstruct_bounded_below(d);
    json out = mif::io::to_json(mif::HerglotzForm(r.form));
    out["conditional"] = r.conditional;
    print_json(out);
    return;
  }
  print_json(mif::io::to_json(mif::HerglotzForm(mif::reconstruct_full(d))));
}

void mif_mixed(const Options& o) {
  const auto r = mif::mixed_reconstruct(mif::io::dataset_from_json(load(o)));
  json recovered = json::object();
  for (const auto& [n, b] : r.recovered_second) recovered[std::to_string(n)] = b;
  print_json({{"form", mif::io::to_json(mif::HerglotzForm(r.form()))},
              {"recoveredSecond", recovered},
              {"orientation", r.orientation},
              {"conditional", r.conditional}});
}

// --- cs ----------------------------------------------------------------------

void cs_spectrum(const Options& o) {
  const auto h = mif::io::hamiltonian_from_json(load(o));
  const auto [lo, hi] = window(o);
  emit_values(o, "eigenvalue", cs::eigenvalues(h, boundary(o), lo, hi));
}

void cs_measure(const Options& o) {
  const auto h = mif::io::hamiltonian_from_json(load(o));
  const auto [lo, hi] = window(o);
  const auto m = cs::spectral_measure(h, boundary(o), lo, hi);
  if (csv(o)) {
    const auto masses = m.clark_masses();
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < masses.size(); ++k) {
      rows.push_back({m.eigenvalues[k], m.norming_constants[k], masses[k]});
    }
    print_csv({"eigenvalue", "norming_constant", "mass"}, rows);
    return;
  }
  print_json(mif::io::to_json(m));
}

void cs_weyl(const Options& o) {
  const auto h = mif::io::hamiltonian_from_json(load(o));
  const auto points = grid(o);
  if (o.alpha2) {
    const cs::GeneralizedBoundary gb(required(o.alpha, "--alpha"), *o.alpha2, required(o.beta, "--beta"));
    emit_grid(o, points, [&](complex z) { return cs::generalized_m(h, gb, z); });
    return;
  }
  const auto bp = boundary(o);
  emit_grid(o, points, [&](complex z) { return cs::weyl_m(h, bp, z); });
}

std::pair<double, double> roundtrip_window(const Options& o, const cs::Hamiltonian& h) {
  if (o.count > 0) return cs::window_for_count(h, boundary(o), o.count);
  return window(o);
}

cs::InverseProblem problem_for(const Options& o, const cs::Hamiltonian& h) {
  const auto [lo, hi] = roundtrip_window(o, h);
  if (!o.alpha2) {
    if (!o.with_masses.empty()) throw mif::DomainError("--with-masses needs --alpha2");
    return cs::measure_problem(h, boundary(o), lo, hi);
  }
  const cs::GeneralizedBoundary gb(required(o.alpha, "--alpha"), *o.alpha2, required(o.beta, "--beta"));
  return cs::two_boundary_problem(h, gb, lo, hi, {o.with_masses.begin(), o.with_masses.end()});
}

void cs_roundtrip(const Options& o) {
  const auto h = mif::io::hamiltonian_from_json(load(o));
  const auto points = grid(o);
  const auto report = cs::inverse_pipeline(problem_for(o, h), h, points, {.tail_factor = o.tail_factor, .extrapolate = o.extrapolate});
  if (csv(o)) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : report.records) {
      rows.push_back({r.grid_point.real(), r.grid_point.imag(), r.forward.real(), r.forward.imag(),
                      r.reconstructed.real(), r.reconstructed.imag(), r.abs_error});
    }
    print_csv({"re", "im", "forward_re", "forward_im", "reconstructed_re", "reconstructed_im", "abs_error"},
              rows);
  } else {
    print_json(mif::io::to_json(report));
  }
  std::cout << "sup_error=" << num(report.sup_error) << " N=" << report.count << '\n';
  if (o.tolerance && !(report.sup_error <= *o.tolerance)) {
    throw ToleranceExceeded("sup_error " + num(report.sup_error) + " exceeds tolerance " + num(*o.tolerance));
  }
}

void cs_two_spectra(const Options& o) {
  required(o.alpha2, "--alpha2");
  const auto h = mif::io::hamiltonian_from_json(load(o));
  print_json(mif::io::to_json(problem_for(o, h)));
}

// --- diag --------------------------------------------------------------------

void diag_shortsum(const Options& o) {
  const auto s = mif::short_interval_sums(mif::io::pairs_from_json(load(o)));
  print_json({{"l1", s.l1}, {"l2", s.l2}});
}

void diag_herglotz_check(const Options& o) {
  const auto form = mif::io::form_from_json(load(o));
  const auto points = grid(o);
  double min_im = INFINITY;
  complex at;
  for (const complex z : points) {
    if (!(z.imag() > 0.0)) throw mif::DomainError("herglotz-check needs grid points with Im z > 0");
    const double v = mif::evaluate(form, z).imag();
    if (v < min_im) {
      min_im = v;
      at = z;
    }
  }
  print_json({{"minIm", min_im}, {"at", mif::io::to_json(at)}, {"herglotz", min_im > 0.0}});
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("input", o.input, "JSON input file, or - for stdin");
  cmd->add_option("--output", o.output, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

void add_grid(CLI::App* cmd, Options& o) {
  cmd->add_option("--grid", o.grid, "Grid \"re0:re1:n,im0:im1:m\"");
}

void add_boundary(CLI::App* cmd, Options& o) {
  cmd->add_option("--alpha", o.alpha, "Boundary angle at 0, in [0, pi)");
  cmd->add_option("--beta", o.beta, "Boundary angle at L, in [0, pi)");
  cmd->add_option("--alpha2", o.alpha2, "Second boundary angle at 0");
}

void add_window(CLI::App* cmd, Options& o) {
  cmd->add_option("--window", o.window, "Spectral window lo:hi");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meromorphic Herglotz functions and canonical systems"};
  app.set_version_flag("--version", std::string("mifkit ") + MIFKIT_VERSION);
  app.require_subcommand(1);
  Options o;
  std::function<void(const Options&)> run;

  const auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help,
                        void (*fn)(const Options&)) {
    auto* cmd = group->add_subcommand(name, help);
    add_common(cmd, o);
    cmd->callback([&run, fn] { run = fn; });
    return cmd;
  };

  auto* mif_group = app.add_subcommand("mif", "Herglotz forms and reconstruction")->require_subcommand(1);
  add_grid(leaf(mif_group, "eval", "Evaluate a form on a grid", mif_eval), o);
  leaf(mif_group, "clark", "Clark masses of a form", mif_clark);
  leaf(mif_group, "zeros", "Second spectrum of a form", mif_zeros);
  leaf(mif_group, "reconstruct", "Reconstruct from spectrum, masses and a constant", mif_reconstruct);
  leaf(mif_group, "mixed", "Reconstruct from mixed masses and second spectrum", mif_mixed);

  auto* cs_group = app.add_subcommand("cs", "Canonical systems")->require_subcommand(1);
  for (auto* cmd : {leaf(cs_group, "spectrum", "Eigenvalues in a window", cs_spectrum),
                    leaf(cs_group, "measure", "Spectral measure in a window", cs_measure),
                    leaf(cs_group, "weyl", "Weyl m-function on a grid", cs_weyl),
                    leaf(cs_group, "roundtrip", "Forward data, reconstruction and comparison", cs_roundtrip),
                    leaf(cs_group, "two-spectra", "Two-boundary inverse data", cs_two_spectra)}) {
    add_boundary(cmd, o);
    add_grid(cmd, o);
    add_window(cmd, o);
  }
  for (const char* name : {"roundtrip", "two-spectra"}) {
    auto* cmd = cs_group->get_subcommand(name);
    cmd->add_option("--count", o.count, "Use the N eigenvalues nearest 0 instead of --window");
    cmd->add_option("--with-masses", o.with_masses, "Indices that keep norming constants")->delimiter(',');
  }
  auto* roundtrip = cs_group->get_subcommand("roundtrip");
  roundtrip->add_option("--tolerance", o.tolerance, "Exit 4 above this sup error");
  roundtrip->add_option("--tail-factor", o.tail_factor,
                        "Extrapolated pairs per side, per eigenvalue, for two-boundary data (0 disables)");
  roundtrip->add_flag("--extrapolate", o.extrapolate, "Build m from the extrapolated two-boundary data");

  auto* diag_group = app.add_subcommand("diag", "Diagnostics")->require_subcommand(1);
  leaf(diag_group, "shortsum", "Short-interval sums of interlacing pairs", diag_shortsum);
  add_grid(leaf(diag_group, "herglotz-check", "Minimum Im m on a grid", diag_herglotz_check), o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    run(o);
    return 0;
  } catch (const ToleranceExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTolerance;
  } catch (const mif::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const mif::NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
