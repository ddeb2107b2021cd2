// cscdubins: command-line front end for the CSC path solver.
//
//   cscdubins solve <scenario.json> [--robust] [--no-gradient] [--seed h_i,h_f]
//   cscdubins sweep --mode planar|nonplanar --fix x|z|angle --value v [--steps n]
//   cscdubins seed-study <scenario.json> [--types 6] [--window ...] [--resolution n]
//   cscdubins grad-study [--cases n] [--rng-seed s]
//   cscdubins contours <scenario.json> [--types ...] [--window ...] [--resolution n]
//   cscdubins regress [--scenarios dir]
//
// Shared: --out <dir> writes files instead of stdout; --format csv|json.
// Exit codes: 0 success, 1 malformed input, 2 no valid solution (solve) or
// failed expectation (regress).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "csc/report.hpp"
#include "csc/studies.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string out;
  std::string format = "csv";
  bool robust = false;
  bool no_gradient = false;
  std::vector<double> window;
  int resolution = 400;
};

void emit(const Common& c, const std::string& file, const std::string& body) {
  if (c.out.empty()) {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << '\n';
    return;
  }
  fs::create_directories(c.out);
  const fs::path p = fs::path(c.out) / file;
  std::ofstream os(p);
  if (!os) throw csc::CscError(csc::ErrorKind::invalid_input, "cannot write " + p.string());
  os << body;
  if (!body.empty() && body.back() != '\n') os << '\n';
  std::cerr << "wrote " << p.string() << '\n';
}

csc::GridWindow window_for(const Common& c, const csc::ProblemInstance& inst) {
  csc::GridWindow win = csc::GridWindow::default_for(inst, c.resolution);
  if (c.window.size() == 1) {
    win = csc::GridWindow::square(c.window[0], c.resolution);
  } else if (c.window.size() == 4) {
    win = {c.window[0], c.window[1], c.window[2], c.window[3], c.resolution};
  } else if (!c.window.empty()) {
    throw csc::CscError(csc::ErrorKind::invalid_input,
                        "--window takes a half-width or h_i_lo,h_i_hi,h_f_lo,h_f_hi");
  }
  win.validate();
  return win;
}

std::vector<csc::SolutionType> parse_types(const std::vector<int>& ids) {
  std::vector<csc::SolutionType> out;
  if (ids.empty()) {
    const auto all = csc::SolutionType::all();
    return {all.begin(), all.end()};
  }
  for (int id : ids) out.push_back(csc::SolutionType::from_id(id));
  return out;
}

csc::Scenario load(const std::string& path, const Common& c) {
  csc::Scenario s = csc::load_scenario(path);
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
  if (c.robust) s.options.seed_policy = csc::SeedPolicy::grid(s.options.seed_policy.n);
  if (c.no_gradient) s.options.use_gradient = false;
  return s;
}

json rows_to_json(const std::string& csv) {
  // Every tabular output is CSV first; JSON mirrors it row by row.
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string h;
    while (std::getline(hs, h, ',')) header.push_back(h);
  }
  json rows = json::array();
  while (std::getline(in, line)) {
    json row;
    std::stringstream ls(line);
    std::string cell;
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (!std::getline(ls, cell, ',')) cell.clear();
      if (cell.empty()) {
        row[header[k]] = nullptr;
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end && *end == '\0') {
        row[header[k]] = v;
      } else {
        row[header[k]] = cell;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_table(const Common& c, const std::string& stem, const std::string& csv) {
  if (c.format == "json") {
    emit(c, stem + ".json", rows_to_json(csv).dump(2));
  } else {
    emit(c, stem + ".csv", csv);
  }
}

int cmd_solve(const std::string& path, const Common& c, const std::vector<double>& seed) {
  csc::Scenario s = load(path, c);
  if (seed.size() == 2) s.options.seed_policy = csc::SeedPolicy::single_seed({seed[0], seed[1]});
  const csc::CaseReport rep = csc::run_case(s);
  if (c.format == "json") {
    emit(c, s.name + ".json", csc::case_report_json(rep).dump(2));
  } else {
    emit(c, s.name + ".csv", csc::case_report_csv(rep));
  }
  if (!rep.note.empty()) std::cerr << "note: " << rep.note << '\n';
  std::cerr << s.name << ": " << rep.valid_count() << " valid of " << rep.solution_count() << " roots in "
            << rep.wall_time_s << " s\n";
  return rep.valid_count() > 0 ? 0 : 2;
}

int cmd_sweep(const Common& c, const std::string& mode, const std::string& fix, double value, int steps) {
  csc::SweepSpec spec;
  if (mode == "planar") {
    spec.mode = csc::SweepMode::planar_xz_theta;
  } else if (mode == "nonplanar") {
    spec.mode = csc::SweepMode::nonplanar_xz_phi;
  } else {
    throw csc::CscError(csc::ErrorKind::invalid_input, "--mode must be planar or nonplanar");
  }
  if (fix == "x") {
    spec.fixed_axis = csc::SweepAxis::x;
  } else if (fix == "z") {
    spec.fixed_axis = csc::SweepAxis::z;
  } else if (fix == "angle" || fix == "theta" || fix == "phi") {
    spec.fixed_axis = csc::SweepAxis::angle;
  } else {
    throw csc::CscError(csc::ErrorKind::invalid_input, "--fix must be x, z or angle");
  }
  spec.fixed_value = value;
  spec.steps = steps;
  const auto res = csc::run_sweep(spec, c.robust, !c.no_gradient);
  std::ostringstream stem;
  stem << "sweep_" << csc::to_string(spec.mode) << "_" << csc::to_string(spec.fixed_axis) << "_" << value;
  emit_table(c, stem.str(), csc::sweep_csv(res));
  return 0;
}

int cmd_seed_study(const std::string& path, const Common& c, const std::vector<int>& types) {
  const csc::Scenario s = load(path, c);
  const auto win = window_for(c, s.instance);
  const auto rows = csc::run_seed_study(s, win, parse_types(types));
  emit_table(c, s.name + "_seeds", csc::seed_study_csv(rows));
  return 0;
}

int cmd_grad_study(const Common& c, int cases, std::uint64_t rng_seed) {
  const auto res = csc::run_gradient_study(cases, rng_seed);
  emit_table(c, "grad_study_" + std::to_string(rng_seed), csc::gradient_study_csv(res));
  int ge = 0;
  for (const auto& g : res) ge += g.difference() >= 0 ? 1 : 0;
  std::cerr << "with-gradient >= without in " << ge << " of " << res.size() << " cases\n";
  return 0;
}

int cmd_contours(const std::string& path, const Common& c, const std::vector<int>& types) {
  const csc::Scenario s = load(path, c);
  const auto win = window_for(c, s.instance);
  std::ostringstream roots;
  roots << "type,h_i,h_f\n";
  for (const auto& t : parse_types(types)) {
    const auto map = csc::build_contours(s.instance, t, win);
    emit_table(c, s.name + "_contours_type" + std::to_string(t.id()), csc::contours_csv(map));
    for (const auto& r : csc::enumerate_roots(map, s.instance)) {
      roots << t.id() << ',' << csc::format_double(r.h_i) << ',' << csc::format_double(r.h_f) << '\n';
    }
  }
  emit_table(c, s.name + "_roots", roots.str());
  return 0;
}

int cmd_regress(const std::string& dir) {
  int failed = 0;
  int checked = 0;
  for (const auto& p : csc::list_scenarios(dir)) {
    const csc::Scenario s = csc::load_scenario(p);
    if (!s.expect) {
      std::printf("SKIP %-26s no expectations\n", s.name.c_str());
      continue;
    }
    const auto rep = csc::run_case(s);
    bool ok = true;
    std::string detail;
    for (const auto& e : csc::check_expectations(rep, *s.expect)) {
      if (!e.passed) {
        ok = false;
        detail += " [" + e.what + ": " + e.detail + "]";
      }
    }
    for (const auto& row : rep.solutions) {
      if (row.verdict.valid && !row.verified) {
        ok = false;
        detail += " [type " + std::to_string(row.type.id()) + " fails verify_path]";
      }
    }
    ++checked;
    failed += ok ? 0 : 1;
    std::printf("%s %-26s %d valid (%d regular, %d switched) %.3fs%s\n", ok ? "PASS" : "FAIL", s.name.c_str(),
                rep.valid_count(), rep.valid_count(false), rep.valid_count(true), rep.wall_time_s,
                detail.c_str());
  }
  std::printf("%d of %d scenarios passed\n", checked - failed, checked);
  return failed == 0 ? 0 : 2;
}

void add_common(CLI::App* app, Common& c, bool window) {
  app->add_option("--out", c.out, "Directory for output files (default: stdout)");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_flag("--robust", c.robust, "Use the default seed grid instead of a single seed");
  app->add_flag("--no-gradient", c.no_gradient, "Finite-difference Jacobian");
  if (window) {
    app->add_option("--window", c.window, "Half-width, or h_i_lo,h_i_hi,h_f_lo,h_f_hi")->delimiter(',');
    app->add_option("--resolution", c.resolution, "Cells per axis")->check(CLI::Range(16, 100000));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D CSC Dubins path solver"};
  app.require_subcommand(1);
  Common common;

  std::string scenario;
  std::vector<double> seed;
  auto* solve = app.add_subcommand("solve", "Solve one scenario");
  solve->add_option("scenario", scenario, "Scenario JSON file")->required();
  solve->add_option("--seed", seed, "Single seed h_i,h_f")->delimiter(',')->expected(2);
  add_common(solve, common, false);

  std::string mode = "planar";
  std::string fix = "angle";
  double value = 0.0;
  int steps = 61;
  auto* sweep = app.add_subcommand("sweep", "Valid-solution counts over a 2D slice");
  sweep->add_option("--mode", mode, "planar (x, z, theta) or nonplanar (x, z, phi)")
      ->check(CLI::IsMember({"planar", "nonplanar"}));
  sweep->add_option("--fix", fix, "Axis held fixed: x, z or angle");
  sweep->add_option("--value", value, "Value of the fixed axis");
  sweep->add_option("--steps", steps, "Samples per swept axis")->check(CLI::Range(2, 100000));
  add_common(sweep, common, false);

  std::vector<int> types;
  auto* seeds = app.add_subcommand("seed-study", "Root reached from each seed of a grid");
  seeds->add_option("scenario", scenario, "Scenario JSON file")->required();
  seeds->add_option("--types", types, "Type ids (default all)")->delimiter(',')->check(CLI::Range(1, 8));
  add_common(seeds, common, true);

  int cases = 1000;
  std::uint64_t rng_seed = 1;
  auto* grad = app.add_subcommand("grad-study", "Analytic vs finite-difference Jacobian");
  grad->add_option("--cases", cases, "Number of random cases")->check(CLI::PositiveNumber);
  grad->add_option("--rng-seed", rng_seed, "Random seed");
  add_common(grad, common, false);

  auto* contours = app.add_subcommand("contours", "Oracle residual grids and enumerated roots");
  contours->add_option("scenario", scenario, "Scenario JSON file")->required();
  contours->add_option("--types", types, "Type ids (default all)")->delimiter(',')->check(CLI::Range(1, 8));
  add_common(contours, common, true);

  std::string dir = "scenarios";
  auto* regress = app.add_subcommand("regress", "Run every checked-in scenario against its expectations");
  regress->add_option("--scenarios", dir, "Scenario directory")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*solve) return cmd_solve(scenario, common, seed);
    if (*sweep) return cmd_sweep(common, mode, fix, value, steps);
    if (*seeds) return cmd_seed_study(scenario, common, types);
    if (*grad) return cmd_grad_study(common, cases, rng_seed);
    if (*contours) return cmd_contours(scenario, common, types);
    if (*regress) return cmd_regress(dir);
  } catch (const csc::CscError& e) {
    std::cerr << "error (" << csc::to_string(e.kind()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
