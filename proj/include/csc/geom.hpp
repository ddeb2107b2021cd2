#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace csc {

/// Vectors shorter than this (in instance length units) are treated as zero.
inline constexpr double kZeroTol = 1e-9;

enum class ErrorKind {
  zero_vector,
  coincident_h_points,
  parallel_directions,
  parallel_start,
  parallel_end,
  not_converged,
  collinear_instance,
  invalid_candidate,
  invalid_input,
};

const char* to_string(ErrorKind kind);

class CscError : public std::runtime_error {
 public:
  CscError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;

  bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// A direction. Only obtainable through normalize() (or negation of an
/// existing unit vector), so the unit-norm invariant always holds.
class UnitVec3 {
 public:
  UnitVec3() = default;  // +z

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }  // NOLINT(google-explicit-constructor)

  UnitVec3 operator-() const { return UnitVec3(-v_); }
  bool operator==(const UnitVec3&) const = default;

 private:
  friend UnitVec3 normalize(const Vec3& v);
  explicit UnitVec3(const Vec3& v) : v_(v) {}
  Vec3 v_{0.0, 0.0, 1.0};
};

/// Throws CscError(zero_vector) when ‖v‖ ≤ kZeroTol or v is not finite.
UnitVec3 normalize(const Vec3& v);

/// Distance from p to the line through origin along dir.
double point_line_distance(const Vec3& p, const Vec3& origin, const UnitVec3& dir);

struct Configuration {
  Vec3 position;
  UnitVec3 direction;
};

struct ProblemInstance {
  Configuration start;
  Configuration goal;
  double radius = 1.0;

  /// Throws CscError(invalid_input) on non-finite data or radius ≤ 0.
  void validate() const;
  double distance() const { return norm(goal.position - start.position); }
};

/// Goal lies on the start line with a parallel heading. Every evaluation of
/// the two-offset parametrization is singular for such instances.
bool is_collinear(const ProblemInstance& inst);

}  // namespace csc
