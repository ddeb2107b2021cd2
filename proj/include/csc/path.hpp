#pragma once

#include <string>
#include <vector>

#include "csc/solver.hpp"

namespace csc {

/// Circular arc traversed counter-clockwise about plane_normal.
struct Arc {
  Vec3 center;
  double radius = 1.0;
  UnitVec3 plane_normal;
  Vec3 start_point;
  double angle = 0.0;      // radians, in [0, 2π)
  bool degenerate = false; // zero turning angle

  Vec3 point_at(double phi) const;
  Vec3 tangent_at(double phi) const;
  Vec3 end_point() const { return point_at(angle); }
  double length() const { return radius * angle; }
};

struct Segment {
  Vec3 from;
  Vec3 to;
  bool reversed = false;  // travels along -ĥ (switched types)

  double length() const { return norm(to - from); }
};

struct CscPath {
  SolutionType type;
  Arc arc_start;
  Segment segment;
  Arc arc_end;
  UnitVec3 travel_direction;  // direction along the segment
  double total_length = 0.0;
};

enum class InvalidityReason { ok, regular_backward, switched_forward, degenerate_segment };

const char* to_string(InvalidityReason reason);

struct ValidityVerdict {
  bool valid = true;
  InvalidityReason reason = InvalidityReason::ok;
};

ValidityVerdict check_directionality(const SolutionCandidate& cand);

/// Arc turning angle from the tangency scalar's side of the h-point. On the
/// start arc the short turn is p < h; on the goal arc it is p > h.
double arc_angle(double cos_turn, double p_minus_h, bool goal_end);

/// Throws CscError(invalid_candidate) for directionally invalid candidates.
CscPath extract_path(const SolutionCandidate& cand, const ProblemInstance& inst);

/// Straight path for a collinear instance with the goal ahead on the start
/// ray and v̂_f = v̂_i: both arcs degenerate. Throws CscError(invalid_input)
/// otherwise.
CscPath straight_path(const ProblemInstance& inst);

/// True when straight_path applies.
bool is_forward_collinear(const ProblemInstance& inst);

double path_length(const CscPath& path);

/// n ≥ 2 points at equal arc-length spacing from start to goal.
std::vector<Vec3> sample_path(const CscPath& path, int n);

/// Position and unit tangent at arc length s from the start.
Vec3 path_point(const CscPath& path, double s, Vec3* tangent = nullptr);

struct CheckResult {
  std::string name;
  bool passed = false;
  double error = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string summary() const;
};

/// Endpoint, tangent, junction, radius and angle checks at tolerance tol
/// (relative to r for lengths).
VerifyReport verify_path(const CscPath& path, const ProblemInstance& inst, double tol);

}  // namespace csc
