#include "csc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "csc/parallel.hpp"

namespace csc {

namespace {
// Nodes this close to zero count as crossings so roots on grid lines survive.
constexpr double kZeroSnap = 1e-12;
}

GridWindow GridWindow::default_for(const ProblemInstance& inst, int resolution) {
  return square(inst.distance() + 4.0 * inst.radius, resolution);
}

GridWindow GridWindow::square(double half_width, int resolution) {
  return {-half_width, half_width, -half_width, half_width, resolution};
}

void GridWindow::validate() const {
  const bool finite = std::isfinite(h_i_lo) && std::isfinite(h_i_hi) && std::isfinite(h_f_lo) &&
                      std::isfinite(h_f_hi);
  if (!finite || !(h_i_lo < h_i_hi) || !(h_f_lo < h_f_hi)) {
    throw CscError(ErrorKind::invalid_input, "grid window needs finite ranges with lo < hi");
  }
  if (resolution < 16) throw CscError(ErrorKind::invalid_input, "grid resolution must be at least 16");
}

bool GridWindow::contains(const HPair& hp) const {
  return hp.h_i >= h_i_lo && hp.h_i <= h_i_hi && hp.h_f >= h_f_lo && hp.h_f <= h_f_hi;
}

std::vector<Cell> ContourMap::shared_cells() const {
  // Both lists are produced in row-major order.
  std::vector<Cell> out;
  auto key = [](const Cell& c) { return std::pair{c.row, c.col}; };
  std::set_intersection(p_i_crossings.begin(), p_i_crossings.end(), p_f_crossings.begin(),
                        p_f_crossings.end(), std::back_inserter(out),
                        [&](const Cell& a, const Cell& b) { return key(a) < key(b); });
  return out;
}

ContourMap build_contours(const ProblemInstance& inst, const SolutionType& type, const GridWindow& win) {
  win.validate();
  ContourMap map;
  map.type = type;
  map.window = win;
  const int m = map.nodes_per_axis();
  const std::size_t total = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  map.p_i.assign(total, 0.0);
  map.p_f.assign(total, 0.0);
  map.singular.assign(total, 0);

  parallel_for(static_cast<std::size_t>(m), [&](std::size_t row_index) {
    const int row = static_cast<int>(row_index);
    for (int col = 0; col < m; ++col) {
      const std::size_t k = map.index(row, col);
      const auto ev = try_residuals(inst, type, {win.node_h_i(col), win.node_h_f(row)});
      if (ev && std::isfinite(ev->residual.p_i) && std::isfinite(ev->residual.p_f)) {
        map.p_i[k] = ev->residual.p_i;
        map.p_f[k] = ev->residual.p_f;
      } else {
        map.singular[k] = 1;
      }
    }
  });

  auto crosses = [&](const std::vector<double>& field, int row, int col) {
    double lo = field[map.index(row, col)];
    double hi = lo;
    for (const auto& [dr, dc] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}}) {
      const double v = field[map.index(row + dr, col + dc)];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return (lo < 0.0 && hi > 0.0) || std::min(std::abs(lo), std::abs(hi)) < kZeroSnap;
  };

  for (int row = 0; row < win.resolution; ++row) {
    for (int col = 0; col < win.resolution; ++col) {
      if (map.singular[map.index(row, col)] || map.singular[map.index(row, col + 1)] ||
          map.singular[map.index(row + 1, col)] || map.singular[map.index(row + 1, col + 1)]) {
        continue;
      }
      if (crosses(map.p_i, row, col)) map.p_i_crossings.push_back({row, col});
      if (crosses(map.p_f, row, col)) map.p_f_crossings.push_back({row, col});
    }
  }
  return map;
}

namespace {

// Newton with a central-difference Jacobian and step halving. Deliberately
// separate from the solver so the two can be checked against each other.
std::optional<HPair> refine(const ProblemInstance& inst, const SolutionType& type, HPair x,
                            const OracleOptions& opts) {
  const double tol = opts.residual_tol * inst.radius;
  auto f = [&](const HPair& q) -> std::optional<ResidualPair> {
    const auto ev = try_residuals(inst, type, q);
    if (!ev) return std::nullopt;
    return ev->residual;
  };
  auto fx = f(x);
  if (!fx) return std::nullopt;
  for (int it = 0; it < opts.max_iters; ++it) {
    if (fx->max_abs() <= tol) return x;
    double jac[2][2];
    for (int col = 0; col < 2; ++col) {
      const double base = col == 0 ? x.h_i : x.h_f;
      const double step = 1e-6 * std::max(1.0, std::abs(base));
      HPair a = x;
      HPair b = x;
      (col == 0 ? a.h_i : a.h_f) += step;
      (col == 0 ? b.h_i : b.h_f) -= step;
      const auto fa = f(a);
      const auto fb = f(b);
      if (!fa || !fb) return std::nullopt;
      jac[0][col] = (fa->p_i - fb->p_i) / (2.0 * step);
      jac[1][col] = (fa->p_f - fb->p_f) / (2.0 * step);
    }
    const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if (!std::isfinite(det) || det == 0.0) return std::nullopt;
    const double dx = (-jac[1][1] * fx->p_i + jac[0][1] * fx->p_f) / det;
    const double dy = (jac[1][0] * fx->p_i - jac[0][0] * fx->p_f) / det;
    const double f0 = std::hypot(fx->p_i, fx->p_f);
    bool moved = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      const HPair trial{x.h_i + t * dx, x.h_f + t * dy};
      const auto ft = f(trial);
      if (ft && std::hypot(ft->p_i, ft->p_f) < f0) {
        x = trial;
        fx = ft;
        moved = true;
        break;
      }
    }
    if (!moved) return std::nullopt;
  }
  if (fx->max_abs() <= tol) return x;
  return std::nullopt;
}

}  // namespace

std::vector<HPair> enumerate_roots(const ContourMap& map, const ProblemInstance& inst,
                                   const OracleOptions& opts) {
  const GridWindow& win = map.window;
  const double wi = win.cell_width_i();
  const double wf = win.cell_width_f();
  std::vector<HPair> roots;
  for (const Cell& cell : map.shared_cells()) {
    const double lo_i = win.node_h_i(cell.col);
    const double lo_f = win.node_h_f(cell.row);
    auto near_cell = [&](const HPair& r) {
      return r.h_i >= lo_i - wi && r.h_i <= lo_i + 2.0 * wi && r.h_f >= lo_f - wf && r.h_f <= lo_f + 2.0 * wf;
    };
    // Centre first, then the corners, until a root near this cell appears.
    const HPair starts[] = {{lo_i + 0.5 * wi, lo_f + 0.5 * wf}, {lo_i, lo_f}, {lo_i + wi, lo_f},
                            {lo_i, lo_f + wf}, {lo_i + wi, lo_f + wf}};
    for (const HPair& s : starts) {
      const auto r = refine(inst, map.type, s, opts);
      if (!r) continue;
      if (win.contains(*r)) roots.push_back(*r);
      if (near_cell(*r)) break;
    }
  }
  std::sort(roots.begin(), roots.end(), [](const HPair& a, const HPair& b) { return a.h_i < b.h_i; });
  std::vector<HPair> unique;
  for (const HPair& r : roots) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const HPair& u) {
      return std::abs(u.h_i - r.h_i) < opts.dedup_tol && std::abs(u.h_f - r.h_f) < opts.dedup_tol;
    });
    if (!dup) unique.push_back(r);
  }
  return unique;
}

std::vector<HPair> enumerate_roots(const ProblemInstance& inst, const SolutionType& type,
                                   const GridWindow& win, const OracleOptions& opts) {
  return enumerate_roots(build_contours(inst, type, win), inst, opts);
}

}  // namespace csc
