#include <gtest/gtest.h>

#include <random>

#include "csc/oracle.hpp"
#include "csc/solver.hpp"
#include "instances.hpp"

namespace csc {
namespace {

double spread(const std::vector<double>& v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

TEST(GridWindow, Validation) {
  EXPECT_NO_THROW(GridWindow::square(5, 16).validate());
  EXPECT_THROW(GridWindow::square(5, 15).validate(), CscError);
  EXPECT_THROW((GridWindow{1, 0, -1, 1, 100}).validate(), CscError);
  const auto w = GridWindow::default_for(testing::fig4());
  EXPECT_DOUBLE_EQ(w.h_i_hi, std::sqrt(10.0) + 4.0);
  EXPECT_EQ(w.resolution, 400);
}

TEST(Contours, DimensionsAndSingularNodes) {
  const auto inst = testing::make_instance({0, 0, 0}, {0, 0, 1}, {0, 0, 3}, {1, 0, 0});
  const auto map = build_contours(inst, SolutionType::from_id(1), GridWindow::square(4, 16));
  EXPECT_EQ(map.nodes_per_axis(), 17);
  EXPECT_EQ(map.p_i.size(), 17u * 17u);
  // h_i = 3, h_f = 0 puts both h-points at (0,0,3).
  EXPECT_EQ(map.singular[map.index(8, 14)], 1);
  EXPECT_EQ(map.singular[map.index(0, 0)], 0);
}

TEST(Oracle, Fig4RegularRootsOnePerType) {
  const auto inst = testing::fig4();
  const auto win = GridWindow::square(10, 400);
  int total = 0;
  for (int id = 1; id <= 4; ++id) {
    const auto roots = enumerate_roots(inst, SolutionType::from_id(id), win);
    total += static_cast<int>(roots.size());
    // Type 3 also has an invalid second root; every type has at least one.
    EXPECT_GE(roots.size(), 1u) << id;
  }
  const auto contours = build_contours(inst, SolutionType::from_id(1), win);
  EXPECT_FALSE(contours.p_i_crossings.empty());
  EXPECT_FALSE(contours.p_f_crossings.empty());
  EXPECT_EQ(total, 5);
}

TEST(Oracle, Fig5Type3HasNoIntersection) {
  const auto inst = testing::fig5();
  const auto map = build_contours(inst, SolutionType::from_id(3), GridWindow::default_for(inst));
  EXPECT_TRUE(map.shared_cells().empty());
  EXPECT_TRUE(enumerate_roots(map, inst).empty());
}

TEST(Oracle, FarSeparationStraightensCurves) {
  // p_i = 0 approaches h_i = const, p_f = 0 approaches h_f = const.
  auto ratios = [](double zi) {
    const auto inst = testing::make_instance({0, 0, zi}, {1, 0, 0}, {0, 0, 0}, {1, 0, 0});
    const auto win = GridWindow::square(10, 200);
    const auto map = build_contours(inst, SolutionType::from_id(1), win);
    std::vector<double> hi, hf, gi, gf;
    for (const auto& c : map.p_i_crossings) {
      hi.push_back(win.node_h_i(c.col));
      hf.push_back(win.node_h_f(c.row));
    }
    for (const auto& c : map.p_f_crossings) {
      gi.push_back(win.node_h_i(c.col));
      gf.push_back(win.node_h_f(c.row));
    }
    return std::pair{spread(hi) / spread(hf), spread(gf) / spread(gi)};
  };
  const auto near = ratios(-10);
  const auto far = ratios(-100);
  EXPECT_LT(far.first, 0.05);
  EXPECT_LT(far.second, 0.05);
  EXPECT_LT(far.first, near.first);
  EXPECT_LT(far.second, near.second);
}

TEST(Oracle, SoundnessAndResolutionMonotonicity) {
  std::mt19937_64 rng(21);
  std::vector<ProblemInstance> cases{testing::fig10(), testing::fig7()};
  for (int k = 0; k < 4; ++k) cases.push_back(testing::random_instance(rng));
  for (const auto& inst : cases) {
    for (const auto& t : SolutionType::all()) {
      const auto coarse = enumerate_roots(inst, t, GridWindow::default_for(inst, 200));
      const auto fine = enumerate_roots(inst, t, GridWindow::default_for(inst, 400));
      for (const auto& r : fine) EXPECT_LE(residuals(inst, t, r).first.max_abs(), 1e-9);
      for (const auto& r : coarse) {
        const bool kept = std::any_of(fine.begin(), fine.end(), [&](const HPair& f) {
          return std::abs(f.h_i - r.h_i) < 1e-6 && std::abs(f.h_f - r.h_f) < 1e-6;
        });
        EXPECT_TRUE(kept) << to_string(t) << " lost (" << r.h_i << ", " << r.h_f << ")";
      }
    }
  }
}

TEST(Oracle, ContainsSolverRootsInWindow) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 10; ++k) {
    const auto inst = testing::random_instance(rng);
    const auto win = GridWindow::default_for(inst);
    for (const auto& c : solve_all(inst)) {
      if (!win.contains(c.hp)) continue;
      const auto roots = enumerate_roots(inst, c.type, win);
      const bool found = std::any_of(roots.begin(), roots.end(), [&](const HPair& r) {
        return std::abs(r.h_i - c.hp.h_i) < 1e-6 && std::abs(r.h_f - c.hp.h_f) < 1e-6;
      });
      EXPECT_TRUE(found);
    }
  }
}

}  // namespace
}  // namespace csc
