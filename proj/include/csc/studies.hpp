#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csc/oracle.hpp"
#include "csc/scenario.hpp"

namespace csc {

// ---- solution-space sweeps -------------------------------------------------

enum class SweepMode { planar_xz_theta, nonplanar_xz_phi };
enum class SweepAxis { x, z, angle };

const char* to_string(SweepMode m);
const char* to_string(SweepAxis a);

/// Start is fixed at the origin heading +z. The goal heading is
/// [−sin θ, 0, cos θ] (planar) or [sin φ, cos φ, 0] (non-planar). One of
/// (x, z, angle) is held at `fixed_value`; the other two are swept.
/// Positions span [lo, hi] inclusive; angles span [0, 2π) exclusive.
struct SweepSpec {
  SweepMode mode = SweepMode::planar_xz_theta;
  SweepAxis fixed_axis = SweepAxis::angle;
  double fixed_value = 0.0;
  int steps = 61;
  double lo = -6.0;
  double hi = 6.0;
  double radius = 1.0;

  void validate() const;
  /// Sample k of an axis that is swept.
  double axis_value(SweepAxis axis, int k) const;
  /// Instance at sweep indices (u, w): u steps the first free axis, w the second.
  ProblemInstance instance(int u, int w) const;
  /// The two free axes, in (u, w) order: x before z before angle.
  std::pair<SweepAxis, SweepAxis> free_axes() const;
};

struct SweepCell {
  int u = 0;
  int w = 0;
  double x = 0.0;
  double z = 0.0;
  double angle = 0.0;
  int count = 0;
  int count_regular = 0;
  int count_switched = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // u-major: index u * steps + w

  const SweepCell& at(int u, int w) const {
    return cells[static_cast<std::size_t>(u) * static_cast<std::size_t>(spec.steps) + static_cast<std::size_t>(w)];
  }
};

/// Valid-solution counts per cell. Seeded at (0, 0) unless `robust`, which uses
/// the default seed grid. Cells run concurrently; order is deterministic.
SweepResult run_sweep(const SweepSpec& spec, bool robust = false, bool use_gradient = true,
                      unsigned max_threads = 0);

/// Columns: u,w,x,z,angle,count,count_regular,count_switched
std::string sweep_csv(const SweepResult& result);

// ---- seed sensitivity ------------------------------------------------------

struct SeedStudyRow {
  HPair seed;
  SolutionType type;
  bool converged = false;
  HPair root;          // meaningful when converged
  int root_id = -1;    // index into the type's distinct roots, -1 if none
  bool valid = false;  // directional validity of the root
};

/// Every seed of grid (n × n over the window) against each requested type.
std::vector<SeedStudyRow> run_seed_study(const Scenario& scenario, const GridWindow& seeds,
                                         const std::vector<SolutionType>& types, unsigned max_threads = 0);

/// Columns: seed_h_i,seed_h_f,type,converged,root_h_i,root_h_f,root_id,valid
std::string seed_study_csv(const std::vector<SeedStudyRow>& rows);

// ---- gradient ablation -----------------------------------------------------

struct GradientCase {
  int index = 0;
  ProblemInstance instance;
  HPair seed;
  double distance = 0.0;
  double orientation_difference = 0.0;  // angle between v̂_i and v̂_f
  int count_gradient = 0;
  int count_no_gradient = 0;
  int difference() const { return count_gradient - count_no_gradient; }
};

/// Start at the origin heading +z; goal position uniform in [−6, 6]³, heading
/// uniform on the sphere; one seed uniform in [−(L+4r), L+4r]². Counts are
/// valid solutions found from that seed with and without the analytic
/// Jacobian. Deterministic for a given rng_seed.
std::vector<GradientCase> run_gradient_study(int n_cases, std::uint64_t rng_seed, unsigned max_threads = 0);

/// Columns: case,x_f,y_f,z_f,vx_f,vy_f,vz_f,seed_h_i,seed_h_f,distance,
/// orientation_difference,count_gradient,count_no_gradient,difference
std::string gradient_study_csv(const std::vector<GradientCase>& cases);

// ---- oracle export ---------------------------------------------------------

/// Columns: type,row,col,h_i,h_f,p_i,p_f,singular
std::string contours_csv(const ContourMap& map);

}  // namespace csc
