#include "csc/residual.hpp"

#include <algorithm>
#include <cmath>

namespace csc {

int SolutionType::id() const {
  const int base = switched ? 5 : 1;
  // Start sign selects the column, end sign the row.
  return base + (start_sign == Sign::plus ? 0 : 2) + (end_sign == Sign::plus ? 0 : 1);
}

SolutionType SolutionType::from_id(int id) {
  if (id < 1 || id > 8) {
    throw CscError(ErrorKind::invalid_input, "solution type id must be in 1..8");
  }
  const int k = (id - 1) % 4;
  return SolutionType{id > 4, (k & 2) ? Sign::minus : Sign::plus, (k & 1) ? Sign::minus : Sign::plus};
}

std::array<SolutionType, 8> SolutionType::all() {
  std::array<SolutionType, 8> out{};
  for (int id = 1; id <= 8; ++id) out[static_cast<std::size_t>(id - 1)] = from_id(id);
  return out;
}

std::string to_string(const SolutionType& type) {
  std::string s = "Type" + std::to_string(type.id()) + (type.switched ? "(sw," : "(reg,");
  s += type.start_sign == Sign::plus ? '+' : '-';
  s += ',';
  s += type.end_sign == Sign::plus ? '+' : '-';
  s += ')';
  return s;
}

double ResidualPair::max_abs() const { return std::max(std::abs(p_i), std::abs(p_f)); }

Vec3 h_point(const Configuration& config, double h) { return config.position + h * config.direction.vec(); }

UnitVec3 s_direction(const Vec3& h_pt_i, const Vec3& h_pt_f) {
  if (norm(h_pt_f - h_pt_i) <= kZeroTol) {
    throw CscError(ErrorKind::coincident_h_points, "h-points coincide; segment direction undefined");
  }
  return normalize(h_pt_f - h_pt_i);
}

namespace {

// Quantities for one end of the path, given the travelled segment direction e.
struct EndTerms {
  Vec3 cr;        // v × e
  double n;       // ‖v × e‖
  double g;       // 1 - e·v
  double p;       // tangency scalar
  Vec3 center;
};

bool end_terms(const Vec3& h_pt, double h, const Vec3& v, const Vec3& e, double r, Sign sign,
               EndTerms& out) {
  out.cr = cross(v, e);
  out.n = norm(out.cr);
  if (!(out.n > kSingularTol)) return false;
  const double k = to_double(sign) * r / out.n;
  out.g = 1.0 - dot(e, v);
  out.p = h + k * out.g;
  out.center = h_pt + k * (v - e);
  return true;
}

// d p / d h_k for one end; de = derivative of e with respect to h_k.
double end_derivative(const EndTerms& t, const Vec3& v, const Vec3& de, double r, Sign sign,
                      double own) {
  const double s = to_double(sign);
  const double dn_num = dot(t.cr, cross(v, de));
  return own - s * r * dot(de, v) / t.n - s * r * t.g * dn_num / (t.n * t.n * t.n);
}

struct Core {
  Geometry geometry;
  EndTerms start;
  EndTerms end;
  double span;  // ‖h_pt_f - h_pt_i‖
};

bool evaluate_core(const ProblemInstance& inst, const SolutionType& type, const HPair& hp, Core& core,
                   ErrorKind* failure) noexcept {
  Geometry& g = core.geometry;
  g.h_pt_i = h_point(inst.start, hp.h_i);
  g.h_pt_f = h_point(inst.goal, hp.h_f);
  const Vec3 d = g.h_pt_f - g.h_pt_i;
  core.span = norm(d);
  if (!std::isfinite(core.span) || core.span <= kZeroTol) {
    if (failure) *failure = ErrorKind::coincident_h_points;
    return false;
  }
  g.hdir = normalize(d);
  const Vec3 e = g.travel_direction(type.switched);
  if (!end_terms(g.h_pt_i, hp.h_i, inst.start.direction, e, inst.radius, type.start_sign, core.start)) {
    if (failure) *failure = ErrorKind::parallel_start;
    return false;
  }
  if (!end_terms(g.h_pt_f, hp.h_f, inst.goal.direction, e, inst.radius, type.end_sign, core.end)) {
    if (failure) *failure = ErrorKind::parallel_end;
    return false;
  }
  g.c_i = core.start.center;
  g.c_f = core.end.center;
  return true;
}

[[noreturn]] void throw_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::coincident_h_points:
      throw CscError(kind, "h-points coincide; segment direction undefined");
    case ErrorKind::parallel_start:
      throw CscError(kind, "start direction parallel to the segment direction");
    case ErrorKind::parallel_end:
      throw CscError(kind, "goal direction parallel to the segment direction");
    default:
      throw CscError(kind, "singular evaluation");
  }
}

}  // namespace

Vec3 circle_center(const Vec3& h_pt, const UnitVec3& v, const UnitVec3& hdir, double r, Sign sign) {
  EndTerms t{};
  if (!end_terms(h_pt, 0.0, v, hdir, r, sign, t)) {
    throw CscError(ErrorKind::parallel_directions, "ray direction parallel to the segment direction");
  }
  return t.center;
}

double tangency_scalar(double h, const UnitVec3& v, const UnitVec3& hdir, double r, Sign sign,
                       bool switched) {
  EndTerms t{};
  const Vec3 e = switched ? -hdir.vec() : hdir.vec();
  if (!end_terms(Vec3{}, h, v, e, r, sign, t)) {
    throw CscError(ErrorKind::parallel_directions, "ray direction parallel to the segment direction");
  }
  return t.p;
}

std::optional<Evaluation> try_residuals(const ProblemInstance& inst, const SolutionType& type,
                                        const HPair& hp, ErrorKind* failure) noexcept {
  Core core{};
  if (!evaluate_core(inst, type, hp, core, failure)) return std::nullopt;
  return Evaluation{{core.start.p, core.end.p}, core.geometry};
}

std::pair<ResidualPair, Geometry> residuals(const ProblemInstance& inst, const SolutionType& type,
                                            const HPair& hp) {
  ErrorKind why = ErrorKind::invalid_input;
  auto ev = try_residuals(inst, type, hp, &why);
  if (!ev) throw_failure(why);
  return {ev->residual, ev->geometry};
}

std::optional<JacobianEvaluation> try_jacobian(const ProblemInstance& inst, const SolutionType& type,
                                               const HPair& hp, ErrorKind* failure) noexcept {
  Core core{};
  if (!evaluate_core(inst, type, hp, core, failure)) return std::nullopt;
  const Vec3& vi = inst.start.direction;
  const Vec3& vf = inst.goal.direction;
  const Vec3& hd = core.geometry.hdir;

  // h_pt_i moves along v_i and h_pt_f along v_f; only the components normal
  // to ĥ rotate it.
  HDirectionDerivatives der;
  der.a_i = (dot(hd, vi) * hd - vi) / core.span;
  der.a_f = (vf - dot(hd, vf) * hd) / core.span;

  const double sigma = type.switched ? -1.0 : 1.0;
  const Vec3 de_i = sigma * der.a_i;
  const Vec3 de_f = sigma * der.a_f;
  const double r = inst.radius;

  JacobianEvaluation out;
  out.residual = {core.start.p, core.end.p};
  out.derivatives = der;
  out.jacobian.dpi_dhi = end_derivative(core.start, vi, de_i, r, type.start_sign, 1.0);
  out.jacobian.dpi_dhf = end_derivative(core.start, vi, de_f, r, type.start_sign, 0.0);
  out.jacobian.dpf_dhi = end_derivative(core.end, vf, de_i, r, type.end_sign, 0.0);
  out.jacobian.dpf_dhf = end_derivative(core.end, vf, de_f, r, type.end_sign, 1.0);
  return out;
}

std::pair<Jacobian2x2, HDirectionDerivatives> jacobian(const ProblemInstance& inst,
                                                       const SolutionType& type, const HPair& hp) {
  ErrorKind why = ErrorKind::invalid_input;
  auto ev = try_jacobian(inst, type, hp, &why);
  if (!ev) throw_failure(why);
  return {ev->jacobian, ev->derivatives};
}

}  // namespace csc
