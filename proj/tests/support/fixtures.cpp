#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mif::testing {

namespace {

// 2 * count strictly increasing points starting just past `start`, moving in
// `direction` (+1 or -1).
std::vector<double> walk(Rng& rng, int count, double start, int direction, double min_step,
                         double max_step) {
  std::uniform_real_distribution<double> step(min_step, max_step);
  std::vector<double> out;
  double x = start;
  for (int i = 0; i < 2 * count; ++i) {
    x += direction * step(rng);
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

HerglotzProductForm random_product_form(Rng& rng, const ProductOptions& o) {
  const int n = std::uniform_int_distribution<int>(o.min_pairs, o.max_pairs)(rng);
  const int negative =
      o.indexing == Indexing::BoundedBelow ? 0 : std::uniform_int_distribution<int>(0, n)(rng);
  std::vector<double> points = walk(rng, negative, -o.guard, -1, o.min_step, o.max_step);
  const auto positive = walk(rng, n - negative, o.guard, +1, o.min_step, o.max_step);
  points.insert(points.end(), positive.begin(), positive.end());

  std::vector<double> a, b;
  for (std::size_t i = 0; i < points.size(); i += 2) {
    a.push_back(points[i]);
    b.push_back(points[i + 1]);
  }
  const double c = std::exp(std::uniform_real_distribution<double>(-1.5, 1.5)(rng));
  return HerglotzProductForm(c, InterlacingPairs::anchored(o.indexing, a, b));
}

complex random_upper(Rng& rng, double re_span, double im_lo, double im_hi) {
  return {std::uniform_real_distribution<double>(-re_span, re_span)(rng),
          std::uniform_real_distribution<double>(im_lo, im_hi)(rng)};
}

canonical::Cell random_cell(Rng& rng, double lo, double hi) {
  const double t = std::uniform_real_distribution<double>(0.0, std::numbers::pi)(rng);
  const double l = std::uniform_real_distribution<double>(lo, hi)(rng);
  const double c = std::cos(t), s = std::sin(t);
  const double h11 = l * c * c + (1.0 - l) * s * s;
  return {h11, (2.0 * l - 1.0) * c * s, 1.0 - h11};
}

canonical::Hamiltonian random_hamiltonian(Rng& rng, int max_cells, double length, double eig_lo,
                                          double eig_hi) {
  const int m = std::uniform_int_distribution<int>(1, max_cells)(rng);
  std::vector<double> widths(m);
  std::uniform_real_distribution<double> w(0.5, 1.5);
  double total = 0.0;
  for (double& x : widths) total += (x = w(rng));
  std::vector<double> grid{0.0};
  for (int i = 0; i < m; ++i) grid.push_back(grid.back() + length * widths[i] / total);
  grid.back() = length;
  std::vector<canonical::Cell> cells;
  for (int i = 0; i < m; ++i) cells.push_back(random_cell(rng, eig_lo, eig_hi));
  return canonical::Hamiltonian(std::move(grid), std::move(cells));
}

double random_angle(Rng& rng, const std::vector<double>& others, double separation) {
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
  for (;;) {
    const double x = u(rng);
    if (std::all_of(others.begin(), others.end(),
                    [&](double y) { return std::abs(std::sin(x - y)) >= separation; })) {
      return x;
    }
  }
}

canonical::Hamiltonian constant_fixture(double length) {
  return canonical::Hamiltonian::constant(length, {0.5, 0.0, 0.5});
}

std::set<int> central_alternate_indices(const std::vector<double>& spectrum, int first_index,
                                        std::size_t count) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < spectrum.size(); ++i) idx.push_back(first_index + static_cast<int>(i));
  std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
    return std::abs(spectrum[x - first_index]) < std::abs(spectrum[y - first_index]);
  });
  idx.resize(std::min(count, idx.size()));
  std::sort(idx.begin(), idx.end());
  std::set<int> out;
  for (std::size_t i = 0; i < idx.size(); i += 2) out.insert(idx[i]);
  return out;
}

}  // namespace mif::testing
