#include <gtest/gtest.h>

#include <random>

#include "csc/residual.hpp"
#include "instances.hpp"

namespace csc {
namespace {

using testing::uniform;

TEST(SolutionType, TableMapping) {
  const SolutionType t2 = SolutionType::from_id(2);
  EXPECT_FALSE(t2.switched);
  EXPECT_EQ(t2.start_sign, Sign::plus);
  EXPECT_EQ(t2.end_sign, Sign::minus);
  const SolutionType t7 = SolutionType::from_id(7);
  EXPECT_TRUE(t7.switched);
  EXPECT_EQ(t7.start_sign, Sign::minus);
  EXPECT_EQ(t7.end_sign, Sign::plus);
  int id = 1;
  for (const auto& t : SolutionType::all()) EXPECT_EQ(t.id(), id++);
  EXPECT_THROW(SolutionType::from_id(0), CscError);
  EXPECT_THROW(SolutionType::from_id(9), CscError);
}

TEST(HPoint, Examples) {
  const Configuration up{{0, 0, 0}, normalize({0, 0, 1})};
  EXPECT_EQ(h_point(up, 2.0), (Vec3{0, 0, 2}));
  const Configuration c{{1, -2, 3}, normalize({1, 1, 0})};
  EXPECT_EQ(h_point(c, 0.0), c.position);
  const Configuration x{{1, 0, 0}, normalize({1, 0, 0})};
  EXPECT_EQ(h_point(x, -1.0), (Vec3{0, 0, 0}));
}

TEST(SDirection, Examples) {
  EXPECT_EQ(s_direction({0, 0, 0}, {0, 0, 5}).vec(), (Vec3{0, 0, 1}));
  const UnitVec3 d = s_direction({1, 1, 1}, {2, 2, 2});
  const double k = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(d.x(), k, 1e-15);
  EXPECT_NEAR(d.y(), k, 1e-15);
  EXPECT_NEAR(d.z(), k, 1e-15);
  try {
    s_direction({0, 0, 0}, {0, 0, 0});
    FAIL();
  } catch (const CscError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::coincident_h_points);
  }
}

TEST(CircleCenter, PerpendicularCase) {
  const UnitVec3 v = normalize({0, 0, 1});
  const UnitVec3 h = normalize({1, 0, 0});
  const Vec3 plus = circle_center({0, 0, 0}, v, h, 1.0, Sign::plus);
  const Vec3 minus = circle_center({0, 0, 0}, v, h, 1.0, Sign::minus);
  EXPECT_NEAR(norm(plus - Vec3{-1, 0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(norm(minus - Vec3{1, 0, -1}), 0.0, 1e-15);
  for (const Vec3& c : {plus, minus}) {
    EXPECT_NEAR(point_line_distance(c, {0, 0, 0}, v), 1.0, 1e-12);
    EXPECT_NEAR(point_line_distance(c, {0, 0, 0}, h), 1.0, 1e-12);
  }
  try {
    circle_center({0, 0, 0}, v, v, 1.0, Sign::plus);
    FAIL();
  } catch (const CscError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parallel_directions);
  }
}

TEST(TangencyScalar, Examples) {
  const UnitVec3 v = normalize({0, 0, 1});
  const UnitVec3 h = normalize({1, 0, 0});
  EXPECT_DOUBLE_EQ(tangency_scalar(2.0, v, h, 1.0, Sign::plus, false), 3.0);
  EXPECT_DOUBLE_EQ(tangency_scalar(2.0, v, h, 1.0, Sign::minus, false), 1.0);
  const UnitVec3 diag = normalize({1, 0, 1});
  EXPECT_NEAR(tangency_scalar(0.0, v, diag, 1.0, Sign::plus, false), std::sqrt(2.0) - 1.0, 1e-15);
  // Switched replaces ĥ by −ĥ: √2 (1 + 1/√2).
  EXPECT_NEAR(tangency_scalar(0.0, v, diag, 1.0, Sign::plus, true), std::sqrt(2.0) + 1.0, 1e-15);
  EXPECT_THROW(tangency_scalar(0.0, v, v, 1.0, Sign::plus, false), CscError);
}

TEST(TangencyScalar, RegularSwitchedAgreeWhenPerpendicular) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Vec3 v = testing::random_unit(rng);
    Vec3 w = cross(v, testing::random_unit(rng));
    if (norm(w) < 1e-3) continue;
    const UnitVec3 uv = normalize(v);
    const UnitVec3 uh = normalize(w);
    const double h = uniform(rng, -5, 5);
    const double r = uniform(rng, 0.5, 2);
    for (Sign s : {Sign::plus, Sign::minus}) {
      EXPECT_NEAR(tangency_scalar(h, uv, uh, r, s, false), tangency_scalar(h, uv, uh, r, s, true), 1e-12);
    }
  }
  // Same through the full residual: x_i = 0 heading +z and h_i = 0 give ĥ ⊥ v̂_i.
  const auto inst = testing::make_instance({0, 0, 0}, {0, 0, 1}, {3, 1, 0}, {0, 1, 0});
  for (double hf : {-2.0, 0.5, 4.0}) {
    const auto reg = residuals(inst, SolutionType::from_id(2), {0.0, hf}).first;
    const auto sw = residuals(inst, SolutionType::from_id(6), {0.0, hf}).first;
    EXPECT_NEAR(reg.p_i, sw.p_i, 1e-12);
  }
}

TEST(Residuals, Fig4RootsVanish) {
  const auto inst = testing::fig4();
  // Oracle-refined roots, one per regular type.
  const HPair roots[] = {{-0.26250681073993576, -0.7592798142514704},
                         {-0.090205749302833288, 0.52399821400002788},
                         {0.35729618402682134, -0.9055246034039518},
                         {0.094519735262505636, 0.52946247148163028}};
  for (int id = 1; id <= 4; ++id) {
    const auto [res, geo] = residuals(inst, SolutionType::from_id(id), roots[id - 1]);
    EXPECT_LT(res.max_abs(), 1e-9) << "type " << id;
  }
}

TEST(Residuals, FarFromRootsFiniteNonzero) {
  const auto inst = testing::fig4();
  for (const auto& t : SolutionType::all()) {
    const auto res = residuals(inst, t, {7.0, -9.0}).first;
    EXPECT_TRUE(std::isfinite(res.p_i) && std::isfinite(res.p_f));
    EXPECT_GT(res.max_abs(), 1e-3);
  }
}

TEST(Residuals, SingularErrors) {
  const auto inst = testing::make_instance({0, 0, 0}, {0, 0, 1}, {0, 0, 5}, {1, 0, 0});
  try {
    residuals(inst, SolutionType::from_id(1), {0.0, 0.0});
    FAIL();
  } catch (const CscError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parallel_start);
  }
  try {
    residuals(inst, SolutionType::from_id(1), {5.0, 0.0});
    FAIL();
  } catch (const CscError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::coincident_h_points);
  }
  const auto inst2 = testing::make_instance({0, 0, 0}, {1, 0, 0}, {0, 0, 5}, {0, 0, 1});
  ErrorKind why{};
  EXPECT_FALSE(try_residuals(inst2, SolutionType::from_id(3), {0.0, 0.0}, &why));
  EXPECT_EQ(why, ErrorKind::parallel_end);
}

struct Sample {
  ProblemInstance inst;
  SolutionType type;
  HPair hp;
};

// Random evaluation points away from the singular set, so central
// differences are themselves accurate.
std::vector<Sample> well_conditioned_samples(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  while (static_cast<int>(out.size()) < count) {
    const auto inst = testing::random_instance(rng);
    const auto type = SolutionType::from_id(1 + static_cast<int>(rng() % 8));
    const double w = inst.distance() + 4.0 * inst.radius;
    const HPair hp{uniform(rng, -w, w), uniform(rng, -w, w)};
    const Vec3 a = h_point(inst.start, hp.h_i);
    const Vec3 b = h_point(inst.goal, hp.h_f);
    if (norm(b - a) < 0.1) continue;
    const UnitVec3 e = normalize(b - a);
    if (norm(cross(inst.start.direction, e)) < 0.05 || norm(cross(inst.goal.direction, e)) < 0.05) continue;
    out.push_back({inst, type, hp});
  }
  return out;
}

TEST(Jacobian, MatchesCentralDifferences) {
  constexpr double step = 1e-6;
  int checked = 0;
  for (const auto& s : well_conditioned_samples(1000, 2024)) {
    const auto [jac, dirs] = jacobian(s.inst, s.type, s.hp);
    auto f = [&](double di, double df) { return residuals(s.inst, s.type, {s.hp.h_i + di, s.hp.h_f + df}).first; };
    const auto pi = f(step, 0), mi = f(-step, 0), pf = f(0, step), mf = f(0, -step);
    const double fd[4] = {(pi.p_i - mi.p_i) / (2 * step), (pf.p_i - mf.p_i) / (2 * step),
                          (pi.p_f - mi.p_f) / (2 * step), (pf.p_f - mf.p_f) / (2 * step)};
    const double an[4] = {jac.dpi_dhi, jac.dpi_dhf, jac.dpf_dhi, jac.dpf_dhf};
    for (int k = 0; k < 4; ++k) {
      EXPECT_LT(std::abs(an[k] - fd[k]) / std::max(1.0, std::abs(fd[k])), 1e-6)
          << to_string(s.type) << " entry " << k << " analytic " << an[k] << " fd " << fd[k];
    }
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(Jacobian, DirectionDerivativesOrthogonal) {
  for (const auto& s : well_conditioned_samples(500, 77)) {
    const auto [jac, dirs] = jacobian(s.inst, s.type, s.hp);
    const auto geo = residuals(s.inst, s.type, s.hp).second;
    EXPECT_NEAR(dot(dirs.a_i, geo.hdir), 0.0, 1e-10);
    EXPECT_NEAR(dot(dirs.a_f, geo.hdir), 0.0, 1e-10);
  }
}

TEST(Jacobian, MirroredPlanarInstance) {
  // x_i = 0, x_f = (d,0,0), both heading +z. Reflecting x -> d - x swaps the
  // ends, maps (a, b) to (b, a) and reverses ĥ, so the regular start residual
  // at (b, a) is the switched goal residual at (a, b) with the same sign.
  const auto inst = testing::make_instance({0, 0, 0}, {0, 0, 1}, {3, 0, 0}, {0, 0, 1});
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const double a = uniform(rng, -5, 5);
    const double b = uniform(rng, -5, 5);
    for (Sign s : {Sign::plus, Sign::minus}) {
      const SolutionType reg{false, s, Sign::plus};
      const SolutionType sw{true, Sign::plus, s};
      const auto jr = jacobian(inst, reg, {b, a}).first;
      const auto js = jacobian(inst, sw, {a, b}).first;
      EXPECT_NEAR(jr.dpi_dhi, js.dpf_dhf, 1e-9);
      EXPECT_NEAR(residuals(inst, reg, {b, a}).first.p_i, residuals(inst, sw, {a, b}).first.p_f, 1e-9);
    }
  }
}

TEST(Properties, TangencyOfCenters) {
  std::mt19937_64 rng(31);
  int n = 0;
  while (n < 1000) {
    const auto inst = testing::random_instance(rng);
    const auto type = SolutionType::from_id(1 + static_cast<int>(rng() % 8));
    const double w = inst.distance() + 4.0;
    const auto ev = try_residuals(inst, type, {uniform(rng, -w, w), uniform(rng, -w, w)});
    if (!ev) continue;
    ++n;
    const Geometry& g = ev->geometry;
    const double r = inst.radius;
    EXPECT_NEAR(point_line_distance(g.c_i, inst.start.position, inst.start.direction), r, 1e-9);
    EXPECT_NEAR(point_line_distance(g.c_i, g.h_pt_i, g.hdir), r, 1e-9);
    EXPECT_NEAR(point_line_distance(g.c_f, inst.goal.position, inst.goal.direction), r, 1e-9);
    EXPECT_NEAR(point_line_distance(g.c_f, g.h_pt_f, g.hdir), r, 1e-9);
  }
}

TEST(Properties, SignStructure) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 1000; ++k) {
    const auto inst = testing::random_instance(rng);
    const HPair hp{uniform(rng, -8, 8), uniform(rng, -8, 8)};
    for (const auto& t : SolutionType::all()) {
      const auto ev = try_residuals(inst, t, hp);
      if (!ev) continue;
      const double di = ev->residual.p_i - hp.h_i;
      const double df = ev->residual.p_f - hp.h_f;
      EXPECT_GE(di * to_double(t.start_sign), 0.0);
      EXPECT_GE(df * to_double(t.end_sign), 0.0);
    }
  }
}

TEST(Properties, RigidMotionInvariance) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 300; ++k) {
    const auto inst = testing::random_instance(rng);
    testing::RigidMotion m{testing::random_unit(rng), uniform(rng, 0, 6.28),
                           {uniform(rng, -20, 20), uniform(rng, -20, 20), uniform(rng, -20, 20)}};
    const auto moved = m.apply(inst);
    const HPair hp{uniform(rng, -8, 8), uniform(rng, -8, 8)};
    for (const auto& t : SolutionType::all()) {
      const auto a = try_residuals(inst, t, hp);
      const auto b = try_residuals(moved, t, hp);
      if (!a || !b) continue;
      EXPECT_NEAR(a->residual.p_i, b->residual.p_i, 1e-9);
      EXPECT_NEAR(a->residual.p_f, b->residual.p_f, 1e-9);
    }
  }
}

}  // namespace
}  // namespace csc
