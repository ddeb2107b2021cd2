#pragma once

// Test-only enumeration of CSC paths that does not use the two-offset
// parametrization. A start circle is fixed by the angle `a` of its center
// about the start ray; departing after turning angle `t` fixes a line. The
// line must be coplanar with the goal ray and tangent to one of the two goal
// circles with consistent orientation. Roots of those two conditions over the
// (a, t) torus are the CSC paths.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "csc/geom.hpp"

namespace csc::testing {

struct GeometricPath {
  double start_turn = 0.0;  // radians
  double segment = 0.0;
  double end_turn = 0.0;    // radians
  double length = 0.0;
  Vec3 departure;   // where the segment starts
  Vec3 direction;   // segment direction
};

class GeometricEnumerator {
 public:
  explicit GeometricEnumerator(const ProblemInstance& inst) : inst_(inst) {
    basis(inst.start.direction, b1_, b2_);
  }

  std::vector<GeometricPath> enumerate(int n = 1500) const {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    std::vector<GeometricPath> out;
    std::vector<std::pair<double, double>> seen;
    for (double side : {1.0, -1.0}) {
      std::vector<std::array<double, 2>> grid(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
      std::vector<unsigned char> ok(grid.size(), 0);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          std::array<double, 2> f{};
          ok[idx(i, j, n)] = eval(kTwoPi * i / n, kTwoPi * j / n, side, f);
          grid[idx(i, j, n)] = f;
        }
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const int ii = (i + 1) % n;
          const int jj = (j + 1) % n;
          const std::size_t c[4] = {idx(i, j, n), idx(ii, j, n), idx(i, jj, n), idx(ii, jj, n)};
          bool all_ok = true;
          for (auto k : c) all_ok = all_ok && ok[k];
          if (!all_ok) continue;
          bool crosses = true;
          for (int comp = 0; comp < 2; ++comp) {
            double lo = grid[c[0]][comp], hi = lo, mag = 0.0;
            for (auto k : c) {
              lo = std::min(lo, grid[k][comp]);
              hi = std::max(hi, grid[k][comp]);
              mag = std::max(mag, std::abs(grid[k][comp]));
            }
            // Large magnitudes flag the jump across a singular direction.
            crosses = crosses && lo <= 0.0 && hi >= 0.0 && mag < 1.0;
          }
          if (!crosses) continue;
          auto root = refine(kTwoPi * (i + 0.5) / n, kTwoPi * (j + 0.5) / n, side);
          if (!root) continue;
          const double a = std::fmod(root->first + 2 * kTwoPi, kTwoPi);
          const double t = std::fmod(root->second + 2 * kTwoPi, kTwoPi);
          const bool dup = std::any_of(seen.begin(), seen.end(), [&](const auto& s) {
            auto wrap = [&](double d) { d = std::abs(d); return std::min(d, kTwoPi - d); };
            return wrap(s.first - a) < 1e-6 && wrap(s.second - t) < 1e-6;
          });
          if (dup) continue;
          if (auto p = build(a, t, side)) {
            seen.emplace_back(a, t);
            out.push_back(*p);
          }
        }
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.length < y.length; });
    return out;
  }

 private:
  static std::size_t idx(int i, int j, int n) {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
  }

  static void basis(const Vec3& v, Vec3& e1, Vec3& e2) {
    const Vec3 a = std::abs(v.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    e1 = cross(v, a);
    e1 = e1 / norm(e1);
    e2 = cross(v, e1);
  }

  void line(double a, double t, Vec3& p, Vec3& dir) const {
    const double r = inst_.radius;
    const Vec3& v = inst_.start.direction;
    const Vec3 n1 = std::cos(a) * b1_ + std::sin(a) * b2_;
    const Vec3 c1 = inst_.start.position + r * n1;
    p = c1 - r * std::cos(t) * n1 + r * std::sin(t) * v;
    dir = std::cos(t) * v + std::sin(t) * n1;
  }

  bool goal_circle(const Vec3& dir, double side, Vec3& c2) const {
    const Vec3& vf = inst_.goal.direction;
    const Vec3 cr = cross(dir, vf);
    if (norm(cr) < 1e-12) return false;
    Vec3 n2 = cross(cr, vf);
    n2 = side * n2 / norm(n2);
    c2 = inst_.goal.position + inst_.radius * n2;
    return true;
  }

  bool eval(double a, double t, double side, std::array<double, 2>& f) const {
    Vec3 p, dir, c2;
    line(a, t, p, dir);
    if (!goal_circle(dir, side, c2)) return false;
    const Vec3 cr = cross(dir, inst_.goal.direction);
    f[0] = dot(inst_.goal.position - p, cr) / norm(cr);
    const Vec3 d = c2 - p;
    f[1] = norm(d - dot(d, dir) * dir) - inst_.radius;
    return std::isfinite(f[0]) && std::isfinite(f[1]);
  }

  std::optional<std::pair<double, double>> refine(double a, double t, double side) const {
    std::array<double, 2> f{};
    if (!eval(a, t, side, f)) return std::nullopt;
    for (int it = 0; it < 60; ++it) {
      if (std::max(std::abs(f[0]), std::abs(f[1])) < 1e-12) return std::pair{a, t};
      const double h = 1e-7;
      std::array<double, 2> fa{}, fb{}, ta{}, tb{};
      if (!eval(a + h, t, side, fa) || !eval(a - h, t, side, fb) || !eval(a, t + h, side, ta) ||
          !eval(a, t - h, side, tb)) {
        return std::nullopt;
      }
      const double j00 = (fa[0] - fb[0]) / (2 * h), j10 = (fa[1] - fb[1]) / (2 * h);
      const double j01 = (ta[0] - tb[0]) / (2 * h), j11 = (ta[1] - tb[1]) / (2 * h);
      const double det = j00 * j11 - j01 * j10;
      if (!std::isfinite(det) || det == 0.0) return std::nullopt;
      const double da = (-j11 * f[0] + j01 * f[1]) / det;
      const double dt = (j10 * f[0] - j00 * f[1]) / det;
      bool moved = false;
      for (double s = 1.0; s > 1e-8; s *= 0.5) {
        std::array<double, 2> g{};
        if (eval(a + s * da, t + s * dt, side, g) && std::hypot(g[0], g[1]) < std::hypot(f[0], f[1])) {
          a += s * da;
          t += s * dt;
          f = g;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (std::max(std::abs(f[0]), std::abs(f[1])) < 1e-9) return std::pair{a, t};
    return std::nullopt;
  }

  std::optional<GeometricPath> build(double a, double t, double side) const {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    Vec3 p, dir, c2;
    line(a, t, p, dir);
    if (!goal_circle(dir, side, c2)) return std::nullopt;
    const Vec3 q = p + dot(c2 - p, dir) * dir;
    const double seg = dot(q - p, dir);
    if (seg < -1e-9) return std::nullopt;
    const Vec3& xf = inst_.goal.position;
    const Vec3& vf = inst_.goal.direction;
    // Arriving along dir at q and turning about c2 must end heading vf at xf.
    const Vec3 w0 = cross(q - c2, dir);
    if (dot(w0, cross(xf - c2, vf)) <= 0.0) return std::nullopt;
    const Vec3 u0 = q - c2;
    const Vec3 u1 = xf - c2;
    const Vec3 axis = w0 / norm(w0);
    double ang = std::atan2(dot(cross(u0, u1), axis), dot(u0, u1));
    if (ang < 0.0) ang += kTwoPi;
    const double r = inst_.radius;
    return GeometricPath{t, std::max(seg, 0.0), ang, r * t + std::max(seg, 0.0) + r * ang, p, dir};
  }

  ProblemInstance inst_;
  Vec3 b1_, b2_;
};

}  // namespace csc::testing
