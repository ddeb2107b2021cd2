#include "csc/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace csc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Vec3 Arc::point_at(double phi) const {
  const Vec3 u = start_point - center;
  return center + std::cos(phi) * u + std::sin(phi) * cross(plane_normal, u);
}

Vec3 Arc::tangent_at(double phi) const {
  const Vec3 u = start_point - center;
  const Vec3 w = cross(plane_normal, u);
  const Vec3 t = -std::sin(phi) * u + std::cos(phi) * w;
  const double n = norm(t);
  return n > 0.0 ? t / n : t;
}

const char* to_string(InvalidityReason reason) {
  switch (reason) {
    case InvalidityReason::ok: return "ok";
    case InvalidityReason::regular_backward: return "regular_backward";
    case InvalidityReason::switched_forward: return "switched_forward";
    case InvalidityReason::degenerate_segment: return "degenerate_segment";
  }
  return "unknown";
}

ValidityVerdict check_directionality(const SolutionCandidate& cand) {
  const Geometry& g = cand.geometry;
  const double along = dot(g.c_f - g.c_i, g.hdir);
  if (std::abs(along) <= kZeroTol) return {true, InvalidityReason::degenerate_segment};
  if (!cand.type.switched && along < 0.0) return {false, InvalidityReason::regular_backward};
  if (cand.type.switched && along > 0.0) return {false, InvalidityReason::switched_forward};
  return {true, InvalidityReason::ok};
}

namespace {

double select_branch(double base, double p_minus_h, bool goal_end) {
  if (p_minus_h == 0.0 || base == 0.0) return 0.0;
  const bool short_turn = goal_end ? p_minus_h > 0.0 : p_minus_h < 0.0;
  return short_turn ? base : kTwoPi - base;
}

// Same angle as acos(v·e), but accurate near 0 and π.
double turn_angle(const Vec3& v, const Vec3& e) { return std::atan2(norm(cross(v, e)), dot(v, e)); }

Arc make_arc(const Vec3& center, const Vec3& start_point, const Vec3& v, const Vec3& e, Sign sign,
             double r, double p_minus_h, bool goal_end) {
  Arc arc;
  arc.center = center;
  arc.radius = r;
  arc.start_point = start_point;
  // Counter-clockwise about -s·(v × e) carries the ray direction into e.
  arc.plane_normal = normalize(-to_double(sign) * cross(v, e));
  arc.angle = select_branch(turn_angle(v, e), p_minus_h, goal_end);
  arc.degenerate = arc.angle == 0.0;
  return arc;
}

}  // namespace

double arc_angle(double cos_turn, double p_minus_h, bool goal_end) {
  return select_branch(std::acos(std::clamp(cos_turn, -1.0, 1.0)), p_minus_h, goal_end);
}

CscPath extract_path(const SolutionCandidate& cand, const ProblemInstance& inst) {
  if (!check_directionality(cand).valid) {
    throw CscError(ErrorKind::invalid_candidate, "candidate fails the segment direction test");
  }
  const Geometry& g = cand.geometry;
  const UnitVec3 e = g.travel_direction(cand.type.switched);
  const Vec3& vi = inst.start.direction;
  const Vec3& vf = inst.goal.direction;
  const double r = inst.radius;

  const Vec3 d_i = dot(g.c_i - g.h_pt_i, g.hdir) * g.hdir.vec() + g.h_pt_i;
  const Vec3 d_f = dot(g.c_f - g.h_pt_f, g.hdir) * g.hdir.vec() + g.h_pt_f;

  CscPath path;
  path.type = cand.type;
  path.travel_direction = e;
  const Vec3 p_i_pt = inst.start.position + cand.residual.p_i * vi;
  path.arc_start = make_arc(g.c_i, p_i_pt, vi, e, cand.type.start_sign, r, cand.residual.p_i - cand.hp.h_i,
                            false);
  path.segment = Segment{d_i, d_f, cand.type.switched};
  path.arc_end = make_arc(g.c_f, d_f, vf, e, cand.type.end_sign, r, cand.residual.p_f - cand.hp.h_f, true);
  path.total_length = path_length(path);
  return path;
}

bool is_forward_collinear(const ProblemInstance& inst) {
  const Vec3& v = inst.start.direction;
  return is_collinear(inst) && dot(v, inst.goal.direction) > 0.0 &&
         dot(inst.goal.position - inst.start.position, v) > kZeroTol;
}

CscPath straight_path(const ProblemInstance& inst) {
  if (!is_forward_collinear(inst)) {
    throw CscError(ErrorKind::invalid_input, "straight path needs the goal ahead on the start ray");
  }
  const UnitVec3 v = inst.start.direction;
  const Vec3 helper = std::abs(v.x()) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const UnitVec3 side = normalize(cross(v, helper));
  auto point_arc = [&](const Vec3& at) {
    Arc arc;
    arc.radius = inst.radius;
    arc.center = at + inst.radius * side.vec();
    arc.start_point = at;
    arc.plane_normal = normalize(cross(v, side));
    arc.angle = 0.0;
    arc.degenerate = true;
    return arc;
  };
  CscPath path;
  path.type = SolutionType::from_id(1);
  path.arc_start = point_arc(inst.start.position);
  path.segment = Segment{inst.start.position, inst.goal.position, false};
  path.arc_end = point_arc(inst.goal.position);
  path.travel_direction = v;
  path.total_length = path_length(path);
  return path;
}

double path_length(const CscPath& path) {
  return path.arc_start.length() + path.segment.length() + path.arc_end.length();
}

Vec3 path_point(const CscPath& path, double s, Vec3* tangent) {
  const double l1 = path.arc_start.length();
  const double ls = path.segment.length();
  const double r0 = path.arc_start.radius;
  const double r1 = path.arc_end.radius;
  if (s <= l1) {
    const double phi = std::max(s, 0.0) / r0;
    if (tangent) *tangent = path.arc_start.tangent_at(phi);
    return path.arc_start.point_at(phi);
  }
  if (s <= l1 + ls) {
    const double t = ls > 0.0 ? (s - l1) / ls : 0.0;
    if (tangent) *tangent = path.travel_direction.vec();
    return path.segment.from + t * (path.segment.to - path.segment.from);
  }
  const double phi = std::min(s - l1 - ls, path.arc_end.length()) / r1;
  if (tangent) *tangent = path.arc_end.tangent_at(phi);
  return path.arc_end.point_at(phi);
}

std::vector<Vec3> sample_path(const CscPath& path, int n) {
  if (n < 2) throw CscError(ErrorKind::invalid_input, "sample_path needs n >= 2");
  const double total = path_length(path);
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      out.push_back(path.arc_start.start_point);
    } else if (k == n - 1) {
      out.push_back(path.arc_end.end_point());
    } else {
      out.push_back(path_point(path, total * k / (n - 1)));
    }
  }
  return out;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "ok   " : "FAIL ") << c.name << " err=" << c.error << '\n';
  }
  return os.str();
}

VerifyReport verify_path(const CscPath& path, const ProblemInstance& inst, double tol) {
  const double r = inst.radius;
  const double len_tol = tol * r;
  VerifyReport rep;
  auto add = [&rep](std::string name, double err, double limit) {
    rep.checks.push_back({std::move(name), std::isfinite(err) && err <= limit, err});
  };
  const Arc& a0 = path.arc_start;
  const Arc& a1 = path.arc_end;
  const Vec3 e = path.travel_direction;

  add("start_position", norm(a0.start_point - inst.start.position), len_tol);
  add("start_tangent", norm(a0.tangent_at(0.0) - inst.start.direction.vec()), tol);
  add("goal_position", norm(a1.end_point() - inst.goal.position), len_tol);
  add("goal_tangent", norm(a1.tangent_at(a1.angle) - inst.goal.direction.vec()), tol);

  add("junction_start_position", norm(a0.end_point() - path.segment.from), len_tol);
  add("junction_start_tangent", norm(a0.tangent_at(a0.angle) - e), tol);
  add("junction_end_position", norm(path.segment.to - a1.start_point), len_tol);
  add("junction_end_tangent", norm(a1.tangent_at(0.0) - e), tol);

  const Vec3 seg = path.segment.to - path.segment.from;
  const double seg_len = norm(seg);
  add("segment_direction", seg_len > len_tol ? seg_len - dot(seg, e) : 0.0, len_tol);

  for (const auto* arc : {&a0, &a1}) {
    const std::string tag = arc == &a0 ? "start" : "end";
    const Vec3 u = arc->start_point - arc->center;
    add("radius_" + tag, std::max(std::abs(norm(u) - r), std::abs(arc->radius - r)), len_tol);
    add("plane_" + tag, std::abs(dot(arc->plane_normal, u)), len_tol);
    const bool in_range = arc->degenerate ? arc->angle == 0.0 : (arc->angle > 0.0 && arc->angle < kTwoPi);
    add("angle_" + tag, in_range ? 0.0 : 1.0, 0.0);
  }
  add("total_length", std::abs(path.total_length - path_length(path)), len_tol);
  return rep;
}

}  // namespace csc
