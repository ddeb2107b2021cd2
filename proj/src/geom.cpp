#include "csc/geom.hpp"

namespace csc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::zero_vector: return "ZeroVector";
    case ErrorKind::coincident_h_points: return "CoincidentHPoints";
    case ErrorKind::parallel_directions: return "ParallelDirections";
    case ErrorKind::parallel_start: return "ParallelDirections(start)";
    case ErrorKind::parallel_end: return "ParallelDirections(end)";
    case ErrorKind::not_converged: return "NotConverged";
    case ErrorKind::collinear_instance: return "CollinearInstance";
    case ErrorKind::invalid_candidate: return "InvalidCandidate";
    case ErrorKind::invalid_input: return "InvalidInput";
  }
  return "Unknown";
}

UnitVec3 normalize(const Vec3& v) {
  const double n = norm(v);
  if (!std::isfinite(n) || n <= kZeroTol) {
    throw CscError(ErrorKind::zero_vector, "cannot normalize a zero-length vector");
  }
  return UnitVec3(v / n);
}

double point_line_distance(const Vec3& p, const Vec3& origin, const UnitVec3& dir) {
  const Vec3 d = p - origin;
  return norm(d - dot(d, dir) * dir.vec());
}

void ProblemInstance::validate() const {
  if (!start.position.is_finite() || !goal.position.is_finite()) {
    throw CscError(ErrorKind::invalid_input, "start and goal positions must be finite");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw CscError(ErrorKind::invalid_input, "turn radius must be positive and finite");
  }
}

bool is_collinear(const ProblemInstance& inst) {
  const Vec3& vi = inst.start.direction;
  const Vec3& vf = inst.goal.direction;
  return norm(cross(vi, vf)) <= kZeroTol &&
         point_line_distance(inst.goal.position, inst.start.position, inst.start.direction) <= kZeroTol;
}

}  // namespace csc
