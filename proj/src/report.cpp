#include "csc/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace csc {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int CaseReport::valid_count() const {
  return static_cast<int>(
      std::count_if(solutions.begin(), solutions.end(), [](const SolutionRow& s) { return s.verdict.valid; }));
}

int CaseReport::valid_count(bool switched) const {
  return static_cast<int>(std::count_if(solutions.begin(), solutions.end(), [&](const SolutionRow& s) {
    return s.verdict.valid && s.type.switched == switched;
  }));
}

const SolutionRow* CaseReport::shortest() const {
  for (const auto& s : solutions) {
    if (s.shortest) return &s;
  }
  return nullptr;
}

CaseReport run_case(const Scenario& scenario) {
  CaseReport rep;
  rep.name = scenario.name;
  rep.instance = scenario.instance;
  rep.warnings = scenario.warnings;
  const auto t0 = std::chrono::steady_clock::now();

  if (is_collinear(scenario.instance)) {
    rep.collinear = true;
    if (is_forward_collinear(scenario.instance)) {
      SolutionRow row;
      row.path = straight_path(scenario.instance);
      row.type = row.path->type;
      row.verified = verify_path(*row.path, scenario.instance, 1e-8).passed();
      rep.solutions.push_back(std::move(row));
      rep.note = "collinear instance: degenerate straight path";
    } else {
      rep.note = "collinear instance: goal not reachable by a straight path; no CSC solution in this parametrization";
    }
  } else {
    for (const auto& cand : solve_all(scenario.instance, scenario.options)) {
      SolutionRow row;
      row.type = cand.type;
      row.hp = cand.hp;
      row.residual = cand.residual;
      row.iterations = cand.iterations;
      row.verdict = check_directionality(cand);
      if (row.verdict.valid) {
        row.path = extract_path(cand, scenario.instance);
        row.verified = verify_path(*row.path, scenario.instance, 1e-8).passed();
      }
      rep.solutions.push_back(std::move(row));
    }
  }

  SolutionRow* best = nullptr;
  for (auto& s : rep.solutions) {
    if (s.verdict.valid && (!best || s.length() < best->length())) best = &s;
  }
  if (best) best->shortest = true;
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string case_report_csv(const CaseReport& report) {
  std::ostringstream os;
  os << "type,switched,start_sign,end_sign,h_i,h_f,p_i,p_f,valid,reason,length,theta_i,segment_length,theta_f,"
        "iterations,verified,shortest\n";
  for (const auto& s : report.solutions) {
    os << s.type.id() << ',' << (s.type.switched ? 1 : 0) << ',' << (s.type.start_sign == Sign::plus ? '+' : '-')
       << ',' << (s.type.end_sign == Sign::plus ? '+' : '-') << ',' << format_double(s.hp.h_i) << ','
       << format_double(s.hp.h_f) << ',' << format_double(s.residual.p_i) << ',' << format_double(s.residual.p_f)
       << ',' << (s.verdict.valid ? 1 : 0) << ',' << to_string(s.verdict.reason) << ',';
    if (s.path) {
      os << format_double(s.path->total_length) << ',' << format_double(s.path->arc_start.angle) << ','
         << format_double(s.path->segment.length()) << ',' << format_double(s.path->arc_end.angle);
    } else {
      os << ",,,";
    }
    os << ',' << s.iterations << ',' << (s.verified ? 1 : 0) << ',' << (s.shortest ? 1 : 0) << '\n';
  }
  return os.str();
}

namespace {

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json arc_json(const Arc& a) {
  return {{"center", vec_json(a.center)},         {"radius", a.radius},
          {"plane_normal", vec_json(a.plane_normal)}, {"start_point", vec_json(a.start_point)},
          {"angle", a.angle},                       {"degenerate", a.degenerate}};
}

}  // namespace

json case_report_json(const CaseReport& report) {
  Scenario sc;
  sc.name = report.name;
  sc.instance = report.instance;
  json j;
  j["name"] = report.name;
  const json inst = to_json(sc);
  j["instance"] = {{"start", inst["start"]}, {"goal", inst["goal"]}, {"radius", inst["radius"]}};
  j["wall_time_s"] = report.wall_time_s;
  j["solution_count"] = report.solution_count();
  j["valid_count"] = report.valid_count();
  j["collinear"] = report.collinear;
  if (!report.note.empty()) j["note"] = report.note;
  if (!report.warnings.empty()) j["warnings"] = report.warnings;
  json rows = json::array();
  for (const auto& s : report.solutions) {
    json r;
    r["type"] = s.type.id();
    r["h_i"] = s.hp.h_i;
    r["h_f"] = s.hp.h_f;
    r["p_i"] = s.residual.p_i;
    r["p_f"] = s.residual.p_f;
    r["valid"] = s.verdict.valid;
    r["reason"] = to_string(s.verdict.reason);
    r["iterations"] = s.iterations;
    r["verified"] = s.verified;
    r["shortest"] = s.shortest;
    if (s.path) {
      r["length"] = s.path->total_length;
      r["theta_i"] = s.path->arc_start.angle;
      r["theta_f"] = s.path->arc_end.angle;
      r["segment_length"] = s.path->segment.length();
      r["path"] = {{"arc_start", arc_json(s.path->arc_start)},
                   {"segment", {{"from", vec_json(s.path->segment.from)},
                                {"to", vec_json(s.path->segment.to)},
                                {"reversed", s.path->segment.reversed}}},
                   {"arc_end", arc_json(s.path->arc_end)}};
    }
    rows.push_back(std::move(r));
  }
  j["solutions"] = std::move(rows);
  return j;
}

std::vector<bool> reverify_report_json(const json& j, double tol) {
  const Scenario sc = parse_scenario(j.at("instance"));
  const ProblemInstance& inst = sc.instance;
  std::vector<bool> out;
  for (const auto& r : j.at("solutions")) {
    if (!r.at("valid").get<bool>()) {
      out.push_back(true);
      continue;
    }
    if (j.value("collinear", false)) {
      out.push_back(verify_path(straight_path(inst), inst, tol).passed());
      continue;
    }
    const auto type = SolutionType::from_id(r.at("type").get<int>());
    const HPair hp{r.at("h_i").get<double>(), r.at("h_f").get<double>()};
    const auto ev = try_residuals(inst, type, hp);
    if (!ev || ev->residual.max_abs() > 1e-9 * inst.radius) {
      out.push_back(false);
      continue;
    }
    const SolutionCandidate cand{type, hp, ev->residual, ev->geometry, 0, hp};
    if (!check_directionality(cand).valid) {
      out.push_back(false);
      continue;
    }
    out.push_back(verify_path(extract_path(cand, inst), inst, tol).passed());
  }
  return out;
}

std::vector<ExpectationCheck> check_expectations(const CaseReport& report, const ScenarioExpectation& expect) {
  std::vector<ExpectationCheck> out;
  std::set<int> valid_types;
  std::set<int> invalid_types;
  std::set<int> present;
  for (const auto& s : report.solutions) {
    present.insert(s.type.id());
    (s.verdict.valid ? valid_types : invalid_types).insert(s.type.id());
  }
  auto join = [](const std::set<int>& v) {
    std::string t;
    for (int x : v) t += (t.empty() ? "" : " ") + std::to_string(x);
    return "{" + t + "}";
  };
  auto count_check = [&](const char* what, const std::optional<int>& want, int got) {
    if (!want) return;
    out.push_back({what, *want == got, "expected " + std::to_string(*want) + ", got " + std::to_string(got)});
  };
  count_check("valid_count", expect.valid_count, report.valid_count());
  count_check("valid_regular", expect.valid_regular, report.valid_count(false));
  count_check("valid_switched", expect.valid_switched, report.valid_count(true));
  if (expect.valid_types) {
    const std::set<int> want(expect.valid_types->begin(), expect.valid_types->end());
    out.push_back({"valid_types", want == valid_types, "expected " + join(want) + ", got " + join(valid_types)});
  }
  for (int t : expect.invalid_types) {
    out.push_back({"invalid_type_" + std::to_string(t), invalid_types.count(t) > 0,
                   "filtered types " + join(invalid_types)});
  }
  for (int t : expect.absent_types) {
    out.push_back({"absent_type_" + std::to_string(t), present.count(t) == 0, "root types " + join(present)});
  }
  return out;
}

}  // namespace csc
