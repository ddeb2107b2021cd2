#pragma once

// Two-offset parametrization of CSC paths.
//
// The straight segment is placed on the line through h_pt_i = x_i + h_i v_i
// and h_pt_f = x_f + h_f v_f. For each end, a turning circle of radius r
// tangent to both the configuration ray and the segment line has one of two
// centers (sign + or -). Projecting that center onto the configuration ray
// gives the tangency scalar p. A CSC path is found when both tangency points
// coincide with the configurations, i.e. p_i = p_f = 0.
//
// Switched types traverse the segment against the h_pt_i -> h_pt_f direction;
// they use the same formulas with that direction negated.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "csc/geom.hpp"

namespace csc {

/// ‖v × ĥ‖ at or below this is a singular evaluation.
inline constexpr double kSingularTol = 1e-9;

enum class Sign : std::int8_t { plus = 1, minus = -1 };

constexpr double to_double(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

struct SolutionType {
  bool switched = false;
  Sign start_sign = Sign::plus;
  Sign end_sign = Sign::plus;

  /// Type number 1-8. Regular: (+,+)=1 (+,-)=2 (-,+)=3 (-,-)=4; switched adds 4.
  int id() const;
  static SolutionType from_id(int id);
  static std::array<SolutionType, 8> all();

  bool operator==(const SolutionType&) const = default;
};

std::string to_string(const SolutionType& type);

struct HPair {
  double h_i = 0.0;
  double h_f = 0.0;
};

struct ResidualPair {
  double p_i = 0.0;
  double p_f = 0.0;

  double max_abs() const;
};

struct Jacobian2x2 {
  double dpi_dhi = 0.0;
  double dpi_dhf = 0.0;
  double dpf_dhi = 0.0;
  double dpf_dhf = 0.0;

  double determinant() const { return dpi_dhi * dpf_dhf - dpi_dhf * dpf_dhi; }
};

/// Derivatives of the (un-negated) segment direction with respect to h_i, h_f.
struct HDirectionDerivatives {
  Vec3 a_i;
  Vec3 a_f;
};

struct Geometry {
  Vec3 h_pt_i;
  Vec3 h_pt_f;
  UnitVec3 hdir;  // from h_pt_i toward h_pt_f, never negated
  Vec3 c_i;
  Vec3 c_f;

  /// Direction actually travelled along the segment: hdir, or -hdir if switched.
  UnitVec3 travel_direction(bool switched) const { return switched ? -hdir : hdir; }
};

struct Evaluation {
  ResidualPair residual;
  Geometry geometry;
};

Vec3 h_point(const Configuration& config, double h);

/// Throws CscError(coincident_h_points) when the points are within kZeroTol.
UnitVec3 s_direction(const Vec3& h_pt_i, const Vec3& h_pt_f);

/// Center of the turning circle touching the ray (h_pt, v) and the line
/// (h_pt, hdir). Throws CscError(parallel_directions) when ‖v × hdir‖ ≤ kSingularTol.
Vec3 circle_center(const Vec3& h_pt, const UnitVec3& v, const UnitVec3& hdir, double r, Sign sign);

/// Signed offset of the tangency point along the configuration ray. `hdir`
/// is the un-negated segment direction; `switched` applies the reversal.
double tangency_scalar(double h, const UnitVec3& v, const UnitVec3& hdir, double r, Sign sign,
                       bool switched);

/// Non-throwing evaluation used by the solver and the grid oracle. On
/// singular input returns nullopt and writes the reason to `failure`.
std::optional<Evaluation> try_residuals(const ProblemInstance& inst, const SolutionType& type,
                                        const HPair& hp, ErrorKind* failure = nullptr) noexcept;

std::pair<ResidualPair, Geometry> residuals(const ProblemInstance& inst, const SolutionType& type,
                                            const HPair& hp);

struct JacobianEvaluation {
  ResidualPair residual;
  Jacobian2x2 jacobian;
  HDirectionDerivatives derivatives;
};

std::optional<JacobianEvaluation> try_jacobian(const ProblemInstance& inst, const SolutionType& type,
                                               const HPair& hp, ErrorKind* failure = nullptr) noexcept;

std::pair<Jacobian2x2, HDirectionDerivatives> jacobian(const ProblemInstance& inst,
                                                       const SolutionType& type, const HPair& hp);

}  // namespace csc
