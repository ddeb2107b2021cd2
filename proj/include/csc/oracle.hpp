#pragma once

// Brute-force root enumeration over a rectangle of (h_i, h_f). Each residual
// field is sampled on a node grid; cells where both fields change sign are
// refined with Newton. Independent of the solver's seeding and deduplication.

#include <cstdint>
#include <vector>

#include "csc/residual.hpp"

namespace csc {

struct GridWindow {
  double h_i_lo = -10.0;
  double h_i_hi = 10.0;
  double h_f_lo = -10.0;
  double h_f_hi = 10.0;
  int resolution = 400;  // cells per axis

  /// Square window [-(L + 4r), L + 4r]² at the default resolution.
  static GridWindow default_for(const ProblemInstance& inst, int resolution = 400);
  static GridWindow square(double half_width, int resolution = 400);

  void validate() const;
  bool contains(const HPair& hp) const;
  double cell_width_i() const { return (h_i_hi - h_i_lo) / resolution; }
  double cell_width_f() const { return (h_f_hi - h_f_lo) / resolution; }
  double node_h_i(int col) const { return h_i_lo + col * cell_width_i(); }
  double node_h_f(int row) const { return h_f_lo + row * cell_width_f(); }
};

struct Cell {
  int row = 0;  // h_f index
  int col = 0;  // h_i index
  bool operator==(const Cell&) const = default;
};

/// Residual fields for one solution type. Node (row, col) sits at
/// (node_h_i(col), node_h_f(row)); row-major with (resolution + 1) columns.
struct ContourMap {
  SolutionType type;
  GridWindow window;
  std::vector<double> p_i;
  std::vector<double> p_f;
  std::vector<std::uint8_t> singular;  // 1 where evaluation failed
  std::vector<Cell> p_i_crossings;
  std::vector<Cell> p_f_crossings;

  int nodes_per_axis() const { return window.resolution + 1; }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(nodes_per_axis()) +
           static_cast<std::size_t>(col);
  }
  /// Cells present in both crossing lists.
  std::vector<Cell> shared_cells() const;
};

ContourMap build_contours(const ProblemInstance& inst, const SolutionType& type, const GridWindow& win);

struct OracleOptions {
  double residual_tol = 1e-9;  // in units of r
  double dedup_tol = 1e-6;
  int max_iters = 100;
};

/// Roots inside the window, refined from every shared sign-change cell,
/// deduplicated, sorted by h_i.
std::vector<HPair> enumerate_roots(const ProblemInstance& inst, const SolutionType& type,
                                   const GridWindow& win, const OracleOptions& opts = {});

std::vector<HPair> enumerate_roots(const ContourMap& map, const ProblemInstance& inst,
                                   const OracleOptions& opts = {});

}  // namespace csc
