#include "csc/studies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "csc/parallel.hpp"
#include "csc/path.hpp"
#include "csc/report.hpp"

namespace csc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Counts {
  int total = 0;
  int regular = 0;
  int switched = 0;
};

Counts count_valid(const ProblemInstance& inst, const SolverOptions& opts) {
  Counts c;
  if (is_collinear(inst)) {
    if (is_forward_collinear(inst)) c.total = c.regular = 1;
    return c;
  }
  for (const auto& cand : solve_all(inst, opts)) {
    if (!check_directionality(cand).valid) continue;
    ++c.total;
    ++(cand.type.switched ? c.switched : c.regular);
  }
  return c;
}

// Portable draws: the engine is fully specified by the standard, the
// conversion below is too (std distributions are not).
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

Vec3 unit_on_sphere(std::mt19937_64& rng) {
  const double z = uniform(rng, -1.0, 1.0);
  const double az = uniform(rng, 0.0, kTwoPi);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(az), s * std::sin(az), z};
}

}  // namespace

const char* to_string(SweepMode m) {
  return m == SweepMode::planar_xz_theta ? "planar_xz_theta" : "nonplanar_xz_phi";
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::x: return "x";
    case SweepAxis::z: return "z";
    case SweepAxis::angle: return "angle";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  if (steps < 2) throw CscError(ErrorKind::invalid_input, "sweep needs at least 2 steps per axis");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw CscError(ErrorKind::invalid_input, "sweep position range needs lo < hi");
  }
  if (!std::isfinite(fixed_value)) throw CscError(ErrorKind::invalid_input, "sweep slice value must be finite");
  if (!(radius > 0.0)) throw CscError(ErrorKind::invalid_input, "sweep radius must be positive");
}

std::pair<SweepAxis, SweepAxis> SweepSpec::free_axes() const {
  switch (fixed_axis) {
    case SweepAxis::x: return {SweepAxis::z, SweepAxis::angle};
    case SweepAxis::z: return {SweepAxis::x, SweepAxis::angle};
    case SweepAxis::angle: break;
  }
  return {SweepAxis::x, SweepAxis::z};
}

double SweepSpec::axis_value(SweepAxis axis, int k) const {
  if (axis == SweepAxis::angle) return kTwoPi * k / steps;
  return lo + (hi - lo) * k / (steps - 1);
}

ProblemInstance SweepSpec::instance(int u, int w) const {
  const auto [au, aw] = free_axes();
  double vals[3] = {0.0, 0.0, 0.0};
  vals[static_cast<int>(fixed_axis)] = fixed_value;
  vals[static_cast<int>(au)] = axis_value(au, u);
  vals[static_cast<int>(aw)] = axis_value(aw, w);
  const double x = vals[0];
  const double z = vals[1];
  const double a = vals[2];
  ProblemInstance inst;
  inst.radius = radius;
  inst.start = {{0.0, 0.0, 0.0}, normalize({0.0, 0.0, 1.0})};
  const Vec3 vf = mode == SweepMode::planar_xz_theta ? Vec3{-std::sin(a), 0.0, std::cos(a)}
                                                     : Vec3{std::sin(a), std::cos(a), 0.0};
  inst.goal = {{x, 0.0, z}, normalize(vf)};
  return inst;
}

SweepResult run_sweep(const SweepSpec& spec, bool robust, bool use_gradient, unsigned max_threads) {
  spec.validate();
  SweepResult res;
  res.spec = spec;
  const auto n = static_cast<std::size_t>(spec.steps);
  res.cells.resize(n * n);
  SolverOptions opts;
  opts.use_gradient = use_gradient;
  opts.seed_policy = robust ? SeedPolicy::grid() : SeedPolicy::single_seed({0.0, 0.0});

  parallel_for(
      n * n,
      [&](std::size_t k) {
        const int u = static_cast<int>(k / n);
        const int w = static_cast<int>(k % n);
        const ProblemInstance inst = spec.instance(u, w);
        SweepCell& cell = res.cells[k];
        cell.u = u;
        cell.w = w;
        cell.x = inst.goal.position.x;
        cell.z = inst.goal.position.z;
        const auto [au, aw] = spec.free_axes();
        cell.angle = au == SweepAxis::angle   ? spec.axis_value(au, u)
                     : aw == SweepAxis::angle ? spec.axis_value(aw, w)
                                              : spec.fixed_value;
        // A goal on top of the start is not a path-planning problem.
        if (inst.distance() <= kZeroTol) return;
        const Counts c = count_valid(inst, opts);
        cell.count = c.total;
        cell.count_regular = c.regular;
        cell.count_switched = c.switched;
      },
      max_threads);
  return res;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "u,w,x,z,angle,count,count_regular,count_switched\n";
  for (const auto& c : result.cells) {
    os << c.u << ',' << c.w << ',' << format_double(c.x) << ',' << format_double(c.z) << ','
       << format_double(c.angle) << ',' << c.count << ',' << c.count_regular << ',' << c.count_switched << '\n';
  }
  return os.str();
}

std::vector<SeedStudyRow> run_seed_study(const Scenario& scenario, const GridWindow& seeds,
                                         const std::vector<SolutionType>& types, unsigned max_threads) {
  seeds.validate();
  scenario.instance.validate();
  scenario.options.validate();
  const int m = seeds.resolution + 1;
  const std::size_t per_type = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  std::vector<SeedStudyRow> rows(per_type * types.size());

  parallel_for(
      rows.size(),
      [&](std::size_t k) {
        const auto& type = types[k / per_type];
        const std::size_t j = k % per_type;
        const HPair seed{seeds.node_h_i(static_cast<int>(j % m)), seeds.node_h_f(static_cast<int>(j / m))};
        SeedStudyRow& row = rows[k];
        row.seed = seed;
        row.type = type;
        if (is_collinear(scenario.instance)) return;
        const auto c = try_solve_type(scenario.instance, type, seed, scenario.options);
        if (!c) return;
        row.converged = true;
        row.root = c->hp;
        row.valid = check_directionality(*c).valid;
      },
      max_threads);

  // Label distinct roots per type in h_i order.
  for (std::size_t t = 0; t < types.size(); ++t) {
    std::vector<HPair> distinct;
    const auto begin = rows.begin() + static_cast<std::ptrdiff_t>(t * per_type);
    const auto end = begin + static_cast<std::ptrdiff_t>(per_type);
    auto same = [&](const HPair& a, const HPair& b) {
      return std::abs(a.h_i - b.h_i) < scenario.options.dedup_tol &&
             std::abs(a.h_f - b.h_f) < scenario.options.dedup_tol;
    };
    for (auto it = begin; it != end; ++it) {
      if (!it->converged) continue;
      if (std::none_of(distinct.begin(), distinct.end(), [&](const HPair& d) { return same(d, it->root); })) {
        distinct.push_back(it->root);
      }
    }
    std::sort(distinct.begin(), distinct.end(), [](const HPair& a, const HPair& b) { return a.h_i < b.h_i; });
    for (auto it = begin; it != end; ++it) {
      if (!it->converged) continue;
      for (std::size_t d = 0; d < distinct.size(); ++d) {
        if (same(distinct[d], it->root)) {
          it->root_id = static_cast<int>(d);
          break;
        }
      }
    }
  }
  return rows;
}

std::string seed_study_csv(const std::vector<SeedStudyRow>& rows) {
  std::ostringstream os;
  os << "seed_h_i,seed_h_f,type,converged,root_h_i,root_h_f,root_id,valid\n";
  for (const auto& r : rows) {
    os << format_double(r.seed.h_i) << ',' << format_double(r.seed.h_f) << ',' << r.type.id() << ','
       << (r.converged ? 1 : 0) << ',';
    if (r.converged) {
      os << format_double(r.root.h_i) << ',' << format_double(r.root.h_f);
    } else {
      os << ',';
    }
    os << ',' << r.root_id << ',' << (r.valid ? 1 : 0) << '\n';
  }
  return os.str();
}

std::vector<GradientCase> run_gradient_study(int n_cases, std::uint64_t rng_seed, unsigned max_threads) {
  if (n_cases < 1) throw CscError(ErrorKind::invalid_input, "gradient study needs at least one case");
  std::vector<GradientCase> cases(static_cast<std::size_t>(n_cases));
  // Draw every instance up front so results do not depend on scheduling.
  std::mt19937_64 rng(rng_seed);
  for (int k = 0; k < n_cases; ++k) {
    GradientCase& c = cases[static_cast<std::size_t>(k)];
    c.index = k;
    ProblemInstance& inst = c.instance;
    inst.start = {{0.0, 0.0, 0.0}, normalize({0.0, 0.0, 1.0})};
    do {
      const Vec3 xf{uniform(rng, -6.0, 6.0), uniform(rng, -6.0, 6.0), uniform(rng, -6.0, 6.0)};
      inst.goal = {xf, normalize(unit_on_sphere(rng))};
    } while (is_collinear(inst) || inst.distance() <= kZeroTol);
    const double w = inst.distance() + 4.0 * inst.radius;
    c.seed = {uniform(rng, -w, w), uniform(rng, -w, w)};
    c.distance = inst.distance();
    c.orientation_difference = std::acos(std::clamp(dot(inst.start.direction, inst.goal.direction), -1.0, 1.0));
  }

  parallel_for(
      cases.size(),
      [&](std::size_t k) {
        GradientCase& c = cases[k];
        SolverOptions opts;
        opts.seed_policy = SeedPolicy::single_seed(c.seed);
        c.count_gradient = count_valid(c.instance, opts).total;
        opts.use_gradient = false;
        c.count_no_gradient = count_valid(c.instance, opts).total;
      },
      max_threads);
  return cases;
}

std::string gradient_study_csv(const std::vector<GradientCase>& cases) {
  std::ostringstream os;
  os << "case,x_f,y_f,z_f,vx_f,vy_f,vz_f,seed_h_i,seed_h_f,distance,orientation_difference,count_gradient,"
        "count_no_gradient,difference\n";
  for (const auto& c : cases) {
    const Vec3& x = c.instance.goal.position;
    const Vec3& v = c.instance.goal.direction;
    os << c.index << ',' << format_double(x.x) << ',' << format_double(x.y) << ',' << format_double(x.z) << ','
       << format_double(v.x) << ',' << format_double(v.y) << ',' << format_double(v.z) << ','
       << format_double(c.seed.h_i) << ',' << format_double(c.seed.h_f) << ',' << format_double(c.distance) << ','
       << format_double(c.orientation_difference) << ',' << c.count_gradient << ',' << c.count_no_gradient << ','
       << c.difference() << '\n';
  }
  return os.str();
}

std::string contours_csv(const ContourMap& map) {
  std::ostringstream os;
  os << "type,row,col,h_i,h_f,p_i,p_f,singular\n";
  const GridWindow& win = map.window;
  const int m = map.nodes_per_axis();
  for (int row = 0; row < m; ++row) {
    for (int col = 0; col < m; ++col) {
      const std::size_t k = map.index(row, col);
      os << map.type.id() << ',' << row << ',' << col << ',' << format_double(win.node_h_i(col)) << ','
         << format_double(win.node_h_f(row)) << ',';
      if (map.singular[k]) {
        os << ",,1\n";
      } else {
        os << format_double(map.p_i[k]) << ',' << format_double(map.p_f[k]) << ",0\n";
      }
    }
  }
  return os.str();
}

}  // namespace csc
