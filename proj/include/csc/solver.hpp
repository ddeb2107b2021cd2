#pragma once

#include <optional>
#include <vector>

#include "csc/residual.hpp"

namespace csc {

struct SeedPolicy {
  enum class Kind { single, grid };

  Kind kind = Kind::grid;
  HPair seed{};              // single mode
  double half_width = 0.0;   // grid mode; <= 0 selects L + 4r
  int n = 5;                 // grid mode; n x n seeds, plus (0, 0)

  static SeedPolicy single_seed(HPair seed) { return {Kind::single, seed, 0.0, 1}; }
  static SeedPolicy grid(int n = 5, double half_width = 0.0) { return {Kind::grid, {}, half_width, n}; }
};

struct SolverOptions {
  double residual_tol = 1e-9;  // in units of r
  int max_iters = 100;
  SeedPolicy seed_policy{};
  double dedup_tol = 1e-6;
  bool use_gradient = true;    // false: forward-difference Jacobian
  // Iterates with |h_i| or |h_f| beyond this are abandoned. Residuals decay
  // toward zero along some asymptotes, so unbounded iteration can report
  // spurious roots near infinity. <= 0 selects 100 (L + 4r).
  double h_bound = 0.0;

  void validate() const;
};

struct SolutionCandidate {
  SolutionType type;
  HPair hp;
  ResidualPair residual;
  Geometry geometry;
  int iterations = 0;
  HPair seed;
};

/// Seeds used by solve_all for an instance, in evaluation order.
std::vector<HPair> make_seeds(const ProblemInstance& inst, const SeedPolicy& policy);

/// Damped Newton from one seed. Returns nullopt when the iteration does not
/// reach residual_tol (the NotConverged outcome).
std::optional<SolutionCandidate> try_solve_type(const ProblemInstance& inst, const SolutionType& type,
                                                const HPair& seed, const SolverOptions& opts);

/// Throwing variant: CscError(not_converged) on failure.
SolutionCandidate solve_type(const ProblemInstance& inst, const SolutionType& type, const HPair& seed,
                             const SolverOptions& opts = {});

/// Every type from every seed, deduplicated and re-verified, ordered by type
/// id then h_i. Throws CscError(collinear_instance) for collinear instances.
std::vector<SolutionCandidate> solve_all(const ProblemInstance& inst, const SolverOptions& opts = {});

/// Merges same-type candidates within `tol` (max-norm in h-space), keeping
/// the smaller residual. Output ordered by type id then h_i.
std::vector<SolutionCandidate> dedup(std::vector<SolutionCandidate> cands, double tol);

}  // namespace csc
