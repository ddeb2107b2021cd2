#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "csc/path.hpp"
#include "csc/scenario.hpp"

namespace csc {

struct SolutionRow {
  SolutionType type;
  HPair hp;
  ResidualPair residual;
  ValidityVerdict verdict;
  int iterations = 0;
  // Present for valid rows only.
  std::optional<CscPath> path;
  bool verified = false;  // verify_path at 1e-8
  bool shortest = false;

  double length() const { return path ? path->total_length : 0.0; }
};

struct CaseReport {
  std::string name;
  ProblemInstance instance;
  std::vector<SolutionRow> solutions;  // solve_all order
  double wall_time_s = 0.0;
  bool collinear = false;
  std::string note;
  std::vector<std::string> warnings;

  int valid_count() const;
  int valid_count(bool switched) const;
  int solution_count() const { return static_cast<int>(solutions.size()); }
  const SolutionRow* shortest() const;
};

/// solve_all, directionality filter, extraction and verification. Collinear
/// instances get the straight path (goal ahead, same heading) or no solutions.
CaseReport run_case(const Scenario& scenario);

/// Columns, in order:
/// type,switched,start_sign,end_sign,h_i,h_f,p_i,p_f,valid,reason,length,
/// theta_i,segment_length,theta_f,iterations,verified,shortest
std::string case_report_csv(const CaseReport& report);
nlohmann::json case_report_json(const CaseReport& report);

/// Rebuilds a report's solutions from its JSON (instance plus type/h rows),
/// re-evaluates them from scratch and re-runs verify_path on every valid one.
/// Returns one entry per JSON solution row, true when the row re-verifies.
std::vector<bool> reverify_report_json(const nlohmann::json& j, double tol = 1e-8);

struct ExpectationCheck {
  std::string what;
  bool passed = false;
  std::string detail;
};

/// Compares a report with a scenario's checked-in expectations.
std::vector<ExpectationCheck> check_expectations(const CaseReport& report, const ScenarioExpectation& expect);

/// %.17g, the serialization used for every float in CSV output.
std::string format_double(double v);

}  // namespace csc
