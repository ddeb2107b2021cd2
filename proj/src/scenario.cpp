#include "csc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace csc {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw CscError(ErrorKind::invalid_input, msg); }

Vec3 read_vec3(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) bad(what + " must be an array of 3 numbers");
  Vec3 v;
  double* out[3] = {&v.x, &v.y, &v.z};
  for (std::size_t k = 0; k < 3; ++k) {
    if (!j[k].is_number()) bad(what + " must be an array of 3 numbers");
    *out[k] = j[k].get<double>();
  }
  if (!v.is_finite()) bad(what + " must be finite");
  return v;
}

Configuration read_config(const json& j, const std::string& what, std::vector<std::string>& warnings) {
  if (!j.is_object() || !j.contains("position") || !j.contains("direction")) {
    bad(what + " needs \"position\" and \"direction\"");
  }
  Configuration c;
  c.position = read_vec3(j.at("position"), what + ".position");
  const Vec3 d = read_vec3(j.at("direction"), what + ".direction");
  try {
    c.direction = normalize(d);
  } catch (const CscError&) {
    bad(what + ".direction must be non-zero");
  }
  if (std::abs(norm(d) - 1.0) > 1e-6) {
    warnings.push_back(what + ".direction had norm " + std::to_string(norm(d)) + "; normalized");
  }
  return c;
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

std::vector<int> read_types(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array of type ids");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<int>() < 1 || e.get<int>() > 8) bad(what + " entries must be 1..8");
    out.push_back(e.get<int>());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void apply_options(const json& j, SolverOptions& o) {
  if (!j.is_object()) bad("\"options\" must be an object");
  try {
    if (j.contains("residual_tol")) o.residual_tol = j.at("residual_tol").get<double>();
    if (j.contains("max_iters")) o.max_iters = j.at("max_iters").get<int>();
    if (j.contains("dedup_tol")) o.dedup_tol = j.at("dedup_tol").get<double>();
    if (j.contains("use_gradient")) o.use_gradient = j.at("use_gradient").get<bool>();
    if (j.contains("h_bound")) o.h_bound = j.at("h_bound").get<double>();
    if (j.contains("seed_policy")) {
      const auto kind = j.at("seed_policy").get<std::string>();
      if (kind == "single") {
        o.seed_policy.kind = SeedPolicy::Kind::single;
      } else if (kind == "grid") {
        o.seed_policy.kind = SeedPolicy::Kind::grid;
      } else {
        bad("seed_policy must be \"single\" or \"grid\"");
      }
    }
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      if (!s.is_array() || s.size() != 2) bad("seed must be [h_i, h_f]");
      o.seed_policy.seed = {s[0].get<double>(), s[1].get<double>()};
    }
    if (j.contains("grid_n")) o.seed_policy.n = j.at("grid_n").get<int>();
    if (j.contains("grid_half_width")) o.seed_policy.half_width = j.at("grid_half_width").get<double>();
  } catch (const json::exception& e) {
    bad(std::string("bad solver option: ") + e.what());
  }
  o.validate();
}

json to_json(const SolverOptions& o) {
  json j;
  j["residual_tol"] = o.residual_tol;
  j["max_iters"] = o.max_iters;
  j["dedup_tol"] = o.dedup_tol;
  j["use_gradient"] = o.use_gradient;
  j["h_bound"] = o.h_bound;
  const bool single = o.seed_policy.kind == SeedPolicy::Kind::single;
  j["seed_policy"] = single ? "single" : "grid";
  if (single) {
    j["seed"] = json::array({o.seed_policy.seed.h_i, o.seed_policy.seed.h_f});
  } else {
    j["grid_n"] = o.seed_policy.n;
    j["grid_half_width"] = o.seed_policy.half_width;
  }
  return j;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) bad("scenario must be a JSON object");
  Scenario s;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) bad("\"name\" must be a string");
    s.name = j.at("name").get<std::string>();
  }
  if (!j.contains("start") || !j.contains("goal")) bad("scenario needs \"start\" and \"goal\"");
  s.instance.start = read_config(j.at("start"), "start", s.warnings);
  s.instance.goal = read_config(j.at("goal"), "goal", s.warnings);
  if (j.contains("radius")) {
    if (!j.at("radius").is_number()) bad("\"radius\" must be a number");
    s.instance.radius = j.at("radius").get<double>();
  }
  s.instance.validate();
  if (j.contains("options")) apply_options(j.at("options"), s.options);

  if (j.contains("expect")) {
    const auto& e = j.at("expect");
    if (!e.is_object()) bad("\"expect\" must be an object");
    ScenarioExpectation x;
    try {
      if (e.contains("valid_count")) x.valid_count = e.at("valid_count").get<int>();
      if (e.contains("valid_regular")) x.valid_regular = e.at("valid_regular").get<int>();
      if (e.contains("valid_switched")) x.valid_switched = e.at("valid_switched").get<int>();
    } catch (const json::exception& ex) {
      bad(std::string("bad expectation: ") + ex.what());
    }
    if (e.contains("valid_types")) x.valid_types = read_types(e.at("valid_types"), "expect.valid_types");
    if (e.contains("invalid_types")) x.invalid_types = read_types(e.at("invalid_types"), "expect.invalid_types");
    if (e.contains("absent_types")) x.absent_types = read_types(e.at("absent_types"), "expect.absent_types");
    s.expect = x;
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open scenario file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad("malformed JSON in " + path.string() + ": " + e.what());
  }
  Scenario s = parse_scenario(j);
  if (s.name.empty()) s.name = path.stem().string();
  return s;
}

json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["start"] = {{"position", vec_json(s.instance.start.position)},
                {"direction", vec_json(s.instance.start.direction)}};
  j["goal"] = {{"position", vec_json(s.instance.goal.position)},
               {"direction", vec_json(s.instance.goal.direction)}};
  j["radius"] = s.instance.radius;
  j["options"] = to_json(s.options);
  return j;
}

std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace csc
