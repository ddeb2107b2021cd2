#include "csc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csc {

void SolverOptions::validate() const {
  if (!(residual_tol > 0.0) || !(dedup_tol > 0.0)) {
    throw CscError(ErrorKind::invalid_input, "solver tolerances must be positive");
  }
  if (max_iters < 1) throw CscError(ErrorKind::invalid_input, "max_iters must be at least 1");
  if (seed_policy.kind == SeedPolicy::Kind::grid && seed_policy.n < 1) {
    throw CscError(ErrorKind::invalid_input, "seed grid needs at least one seed per axis");
  }
}

std::vector<HPair> make_seeds(const ProblemInstance& inst, const SeedPolicy& policy) {
  if (policy.kind == SeedPolicy::Kind::single) return {policy.seed};
  const double w = policy.half_width > 0.0 ? policy.half_width : inst.distance() + 4.0 * inst.radius;
  std::vector<HPair> seeds{{0.0, 0.0}};
  const int n = policy.n;
  seeds.reserve(static_cast<std::size_t>(n * n) + 1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double ta = n == 1 ? 0.5 : static_cast<double>(a) / (n - 1);
      const double tb = n == 1 ? 0.5 : static_cast<double>(b) / (n - 1);
      seeds.push_back({-w + 2.0 * w * ta, -w + 2.0 * w * tb});
    }
  }
  return seeds;
}

namespace {

constexpr int kMaxHalvings = 20;

double norm2(const ResidualPair& r) { return std::hypot(r.p_i, r.p_f); }

std::optional<Jacobian2x2> finite_difference_jacobian(const ProblemInstance& inst, const SolutionType& type,
                                                      const HPair& hp, const ResidualPair& f0) {
  // Forward differences with MINPACK-style relative steps.
  const double base = std::sqrt(std::numeric_limits<double>::epsilon());
  Jacobian2x2 j;
  for (int col = 0; col < 2; ++col) {
    const double x = col == 0 ? hp.h_i : hp.h_f;
    double step = base * (x == 0.0 ? 1.0 : std::abs(x));
    std::optional<Evaluation> ev;
    for (double s : {step, -step}) {
      HPair q = hp;
      (col == 0 ? q.h_i : q.h_f) += s;
      ev = try_residuals(inst, type, q);
      if (ev) {
        step = s;
        break;
      }
    }
    if (!ev) return std::nullopt;
    const double di = (ev->residual.p_i - f0.p_i) / step;
    const double df = (ev->residual.p_f - f0.p_f) / step;
    if (col == 0) {
      j.dpi_dhi = di;
      j.dpf_dhi = df;
    } else {
      j.dpi_dhf = di;
      j.dpf_dhf = df;
    }
  }
  return j;
}

// Newton direction; falls back to a regularized least-squares step when J is
// (nearly) singular.
std::optional<HPair> newton_step(const Jacobian2x2& j, const ResidualPair& f) {
  const double det = j.determinant();
  const double scale = std::abs(j.dpi_dhi * j.dpf_dhf) + std::abs(j.dpi_dhf * j.dpf_dhi);
  if (std::isfinite(det) && std::abs(det) > 1e-13 * std::max(scale, 1e-300)) {
    return HPair{(-j.dpf_dhf * f.p_i + j.dpi_dhf * f.p_f) / det,
                 (j.dpf_dhi * f.p_i - j.dpi_dhi * f.p_f) / det};
  }
  // (JᵀJ + μI) dx = -Jᵀf
  const double a = j.dpi_dhi * j.dpi_dhi + j.dpf_dhi * j.dpf_dhi;
  const double b = j.dpi_dhi * j.dpi_dhf + j.dpf_dhi * j.dpf_dhf;
  const double d = j.dpi_dhf * j.dpi_dhf + j.dpf_dhf * j.dpf_dhf;
  const double mu = 1e-8 * (a + d) + 1e-300;
  const double g0 = -(j.dpi_dhi * f.p_i + j.dpf_dhi * f.p_f);
  const double g1 = -(j.dpi_dhf * f.p_i + j.dpf_dhf * f.p_f);
  const double m = (a + mu) * (d + mu) - b * b;
  if (!std::isfinite(m) || m <= 0.0) return std::nullopt;
  return HPair{((d + mu) * g0 - b * g1) / m, ((a + mu) * g1 - b * g0) / m};
}

// A few full Newton steps past tolerance, kept only while the residual
// shrinks. Flat residual fields otherwise leave converged roots scattered by
// more than the deduplication tolerance.
std::optional<Jacobian2x2> jacobian_at(const ProblemInstance& inst, const SolutionType& type,
                                       const SolverOptions& opts, const HPair& x, const ResidualPair& f) {
  if (!opts.use_gradient) return finite_difference_jacobian(inst, type, x, f);
  if (auto je = try_jacobian(inst, type, x)) return je->jacobian;
  return std::nullopt;
}

// Where the p_i = 0 and p_f = 0 curves touch, the root is double and Newton
// only converges linearly. Alternate a secant search for det J = 0 along the
// null direction of J with a rank-one least-squares step across it.
void refine_double_root(const ProblemInstance& inst, const SolutionType& type, const SolverOptions& opts,
                        HPair& x, Evaluation& cur) {
  HPair y = x;
  ResidualPair fy = cur.residual;
  for (int round = 0; round < 6; ++round) {
    const auto j = jacobian_at(inst, type, opts, y, fy);
    if (!j) return;
    const double scale = std::abs(j->dpi_dhi * j->dpf_dhf) + std::abs(j->dpi_dhf * j->dpf_dhi);
    if (!(scale > 0.0) || std::abs(j->determinant()) > 1e-3 * scale) return;
    // Null direction: orthogonal to the row of J with the larger norm.
    const bool top = std::hypot(j->dpi_dhi, j->dpi_dhf) >= std::hypot(j->dpf_dhi, j->dpf_dhf);
    double ni = top ? -j->dpi_dhf : -j->dpf_dhf;
    double nf = top ? j->dpi_dhi : j->dpf_dhi;
    const double len = std::hypot(ni, nf);
    ni /= len;
    nf /= len;
    auto det_at = [&](double t) -> std::optional<double> {
      const HPair q{y.h_i + t * ni, y.h_f + t * nf};
      const auto ev = try_residuals(inst, type, q);
      if (!ev) return std::nullopt;
      const auto jq = jacobian_at(inst, type, opts, q, ev->residual);
      if (!jq) return std::nullopt;
      return jq->determinant();
    };
    double t0 = 0.0;
    double t1 = 1e-4 * std::max(1.0, std::hypot(y.h_i, y.h_f));
    auto d0 = std::optional<double>(j->determinant());
    auto d1 = det_at(t1);
    for (int k = 0; k < 30 && d1 && *d1 != *d0; ++k) {
      const double t2 = t1 - *d1 * (t1 - t0) / (*d1 - *d0);
      t0 = t1;
      d0 = d1;
      t1 = t2;
      d1 = det_at(t1);
      if (std::abs(t1 - t0) < 1e-15 * std::max(1.0, std::abs(t1))) break;
    }
    if (!d1 || !std::isfinite(t1)) return;
    HPair q{y.h_i + t1 * ni, y.h_f + t1 * nf};
    auto ev = try_residuals(inst, type, q);
    if (!ev) return;
    const auto jq = jacobian_at(inst, type, opts, q, ev->residual);
    if (!jq) return;
    // J+ f for a rank-one J is Jt f / |J|^2.
    const double fro = jq->dpi_dhi * jq->dpi_dhi + jq->dpi_dhf * jq->dpi_dhf + jq->dpf_dhi * jq->dpf_dhi +
                       jq->dpf_dhf * jq->dpf_dhf;
    if (!(fro > 0.0)) return;
    const ResidualPair& f = ev->residual;
    q.h_i -= (jq->dpi_dhi * f.p_i + jq->dpf_dhi * f.p_f) / fro;
    q.h_f -= (jq->dpi_dhf * f.p_i + jq->dpf_dhf * f.p_f) / fro;
    ev = try_residuals(inst, type, q);
    if (!ev) return;
    y = q;
    fy = ev->residual;
    if (norm2(fy) < norm2(cur.residual)) {
      x = y;
      cur = *ev;
    }
    if (cur.residual.max_abs() == 0.0) return;
  }
}

void polish(const ProblemInstance& inst, const SolutionType& type, const SolverOptions& opts, HPair& x,
            Evaluation& cur) {
  refine_double_root(inst, type, opts, x, cur);
  for (int k = 0; k < 3; ++k) {
    const auto jac = jacobian_at(inst, type, opts, x, cur.residual);
    if (!jac) return;
    const auto step = newton_step(*jac, cur.residual);
    if (!step) return;
    const HPair trial{x.h_i + step->h_i, x.h_f + step->h_f};
    auto ev = try_residuals(inst, type, trial);
    if (!ev || !(norm2(ev->residual) < norm2(cur.residual))) return;
    x = trial;
    cur = *ev;
  }
}

}  // namespace

std::optional<SolutionCandidate> try_solve_type(const ProblemInstance& inst, const SolutionType& type,
                                                const HPair& seed, const SolverOptions& opts) {
  const double tol = opts.residual_tol * inst.radius;
  const double bound =
      opts.h_bound > 0.0 ? opts.h_bound : 100.0 * (inst.distance() + 4.0 * inst.radius);
  auto in_bounds = [bound](const HPair& q) { return std::abs(q.h_i) <= bound && std::abs(q.h_f) <= bound; };

  // A singular seed is nudged along h-space; this keeps the search invariant
  // under rigid motions of the instance.
  HPair x = seed;
  std::optional<Evaluation> cur = try_residuals(inst, type, x);
  if (!cur) {
    const double d = 1e-3 * inst.radius;
    for (const HPair off : {HPair{0.0, d}, HPair{d, 0.0}, HPair{d, d}, HPair{0.0, -d}, HPair{-d, 0.0},
                            HPair{-d, -d}, HPair{d, -d}, HPair{-d, d}}) {
      x = {seed.h_i + off.h_i, seed.h_f + off.h_f};
      cur = try_residuals(inst, type, x);
      if (cur) break;
    }
    if (!cur) return std::nullopt;
  }

  for (int it = 0; it <= opts.max_iters; ++it) {
    if (cur->residual.max_abs() <= tol) {
      polish(inst, type, opts, x, *cur);
      return SolutionCandidate{type, x, cur->residual, cur->geometry, it, seed};
    }
    if (it == opts.max_iters) break;

    std::optional<Jacobian2x2> jac;
    if (opts.use_gradient) {
      if (auto je = try_jacobian(inst, type, x)) jac = je->jacobian;
    } else {
      jac = finite_difference_jacobian(inst, type, x, cur->residual);
    }
    if (!jac) return std::nullopt;
    const auto step = newton_step(*jac, cur->residual);
    if (!step) return std::nullopt;

    const double f0 = norm2(cur->residual);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k <= kMaxHalvings; ++k, t *= 0.5) {
      const HPair trial{x.h_i + t * step->h_i, x.h_f + t * step->h_f};
      auto ev = try_residuals(inst, type, trial);
      if (ev && norm2(ev->residual) < f0) {
        if (!in_bounds(trial)) return std::nullopt;
        x = trial;
        cur = ev;
        accepted = true;
        break;
      }
    }
    if (!accepted) return std::nullopt;
  }
  return std::nullopt;
}

SolutionCandidate solve_type(const ProblemInstance& inst, const SolutionType& type, const HPair& seed,
                             const SolverOptions& opts) {
  opts.validate();
  if (auto c = try_solve_type(inst, type, seed, opts)) return *c;
  throw CscError(ErrorKind::not_converged, "no root reached from this seed for " + to_string(type));
}

std::vector<SolutionCandidate> dedup(std::vector<SolutionCandidate> cands, double tol) {
  std::stable_sort(cands.begin(), cands.end(), [](const SolutionCandidate& a, const SolutionCandidate& b) {
    if (a.type.id() != b.type.id()) return a.type.id() < b.type.id();
    return a.hp.h_i < b.hp.h_i;
  });
  std::vector<SolutionCandidate> out;
  out.reserve(cands.size());
  for (auto& c : cands) {
    bool merged = false;
    // Scan back through survivors of the same type; sorted by h_i, so stop
    // once the h_i gap exceeds tol.
    for (auto it = out.rbegin(); it != out.rend() && it->type == c.type; ++it) {
      if (c.hp.h_i - it->hp.h_i >= tol) break;
      if (std::abs(c.hp.h_f - it->hp.h_f) < tol) {
        if (c.residual.max_abs() < it->residual.max_abs()) *it = c;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(std::move(c));
  }
  // Replacements can perturb h_i order inside a cluster.
  std::stable_sort(out.begin(), out.end(), [](const SolutionCandidate& a, const SolutionCandidate& b) {
    if (a.type.id() != b.type.id()) return a.type.id() < b.type.id();
    return a.hp.h_i < b.hp.h_i;
  });
  return out;
}

std::vector<SolutionCandidate> solve_all(const ProblemInstance& inst, const SolverOptions& opts) {
  inst.validate();
  opts.validate();
  if (is_collinear(inst)) {
    throw CscError(ErrorKind::collinear_instance, "goal lies on the start line with a parallel heading");
  }
  const auto seeds = make_seeds(inst, opts.seed_policy);
  const double tol = opts.residual_tol * inst.radius;
  std::vector<SolutionCandidate> found;
  for (const auto& type : SolutionType::all()) {
    for (const auto& seed : seeds) {
      auto c = try_solve_type(inst, type, seed, opts);
      if (!c) continue;
      // Re-evaluate from scratch rather than trusting the iterate.
      auto ev = try_residuals(inst, type, c->hp);
      if (!ev || ev->residual.max_abs() > tol) continue;
      c->residual = ev->residual;
      c->geometry = ev->geometry;
      found.push_back(*c);
    }
  }
  return dedup(std::move(found), opts.dedup_tol);
}

}  // namespace csc
