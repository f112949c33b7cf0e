#include "admm_ilqr/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "admm_ilqr/errors.hpp"

namespace admm_ilqr {

namespace {

using Json = nlohmann::ordered_json;

Json point_json(const Point2& p) { return Json::array({p.x(), p.y()}); }

Json ilqr_json(const ILQRSettings& s) {
  return {{"max_iters", s.max_iters},     {"cost_tolerance", s.cost_tolerance},
          {"mu_init", s.mu_init},         {"mu_min", s.mu_min},
          {"mu_max", s.mu_max},           {"mu_growth", s.mu_growth},
          {"mu_shrink", s.mu_shrink},     {"line_search_steps", s.line_search_steps}};
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// Walks one JSON object, checking types and rejecting keys nobody asked for.
class Section {
 public:
  Section(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      fail("expected an object");
    }
  }

  void read(const char* key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) {
        fail(key, "expected a number");
      }
      out = v->get<double>();
    }
  }

  void read(const char* key, int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) {
        fail(key, "expected an integer");
      }
      out = v->get<int>();
    }
  }

  void read(const char* key, std::uint64_t& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
        fail(key, "expected a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  void read(const char* key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) {
        fail(key, "expected true or false");
      }
      out = v->get<bool>();
    }
  }

  void read(const char* key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) {
        fail(key, "expected a string");
      }
      out = v->get<std::string>();
    }
  }

  void read(const char* key, std::optional<double>& out) {
    if (const Json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_number()) {
        out = v->get<double>();
      } else {
        fail(key, "expected a number or null");
      }
    }
  }

  void read(const char* key, Point2& out) {
    if (const Json* v = find(key)) {
      out = to_point(*v, child_path(key));
    }
  }

  const Json* find(const char* key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  /// Call after all reads; reports the first key that was never requested.
  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) {
        fail(it.key(), "unknown key");
      }
    }
  }

  static Point2 to_point(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError(path + ": expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError((path_.empty() ? std::string("config") : path_) + ": " + msg);
  }
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(child_path(key) + ": " + msg);
  }

  const Json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_ilqr(Section& parent, const std::string& path, ILQRSettings& s) {
  const Json* node = parent.find("ilqr");
  if (!node) {
    return;
  }
  Section sec(*node, path);
  sec.read("max_iters", s.max_iters);
  sec.read("cost_tolerance", s.cost_tolerance);
  sec.read("mu_init", s.mu_init);
  sec.read("mu_min", s.mu_min);
  sec.read("mu_max", s.mu_max);
  sec.read("mu_growth", s.mu_growth);
  sec.read("mu_shrink", s.mu_shrink);
  sec.read("line_search_steps", s.line_search_steps);
  sec.finish();
}

}  // namespace

std::string to_json_text(const ScenarioConfig& c) {
  Json j;
  j["id"] = c.id;
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["horizon"] = c.horizon;
  j["initial_state"] = {
      {"px", c.initial.px}, {"py", c.initial.py}, {"theta", c.initial.theta}, {"v", c.initial.v}};
  j["vehicle"] = {{"wheelbase", c.vehicle.wheelbase},
                  {"dt", c.vehicle.dt},
                  {"body_length", c.vehicle.body_length},
                  {"body_width", c.vehicle.body_width}};
  j["weights"] = {{"q1", c.weights.q1},
                  {"q2", c.weights.q2},
                  {"r1", c.weights.r1},
                  {"r2", c.weights.r2},
                  {"terminal_scale", c.weights.terminal_scale}};
  Json polyline = Json::array();
  for (const Point2& p : c.reference.polyline) {
    polyline.push_back(point_json(p));
  }
  j["reference"] = {{"lateral_target", optional_json(c.reference.lateral_target)},
                    {"speed", optional_json(c.reference.speed)},
                    {"polyline", polyline}};
  j["bounds"] = {{"w_max", c.bounds.w_max},
                 {"a_max_acc", c.bounds.a_max_acc},
                 {"a_max_dec", c.bounds.a_max_dec}};
  j["heading_convention"] =
      c.heading_convention == HeadingConvention::kEgo ? "ego" : "obstacle";
  Json obstacles = Json::array();
  for (const Obstacle& o : c.obstacles) {
    obstacles.push_back({{"center0", point_json(o.center0)},
                         {"velocity", point_json(o.velocity)},
                         {"heading", o.heading},
                         {"e_a", o.e_a},
                         {"e_b", o.e_b}});
  }
  j["obstacles"] = obstacles;
  j["admm"] = {{"sigma", c.admm.sigma},
               {"max_admm_iters", c.admm.max_admm_iters},
               {"primal_tolerance", c.admm.primal_tolerance},
               {"parallel_projection", c.admm.parallel_projection},
               {"ilqr", ilqr_json(c.admm.ilqr)}};
  j["barrier"] = {{"t0", c.barrier.t0},
                  {"kappa", c.barrier.kappa},
                  {"outer_iters", c.barrier.outer_iters},
                  {"epsilon", c.barrier.epsilon},
                  {"ilqr", ilqr_json(c.barrier.ilqr)}};
  return j.dump(2) + "\n";
}

ScenarioConfig from_json_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }

  ScenarioConfig c;
  Section root(j, "");
  root.read("id", c.id);
  root.read("name", c.name);
  root.read("seed", c.seed);
  root.read("horizon", c.horizon);

  if (const Json* n = root.find("initial_state")) {
    Section s(*n, "initial_state");
    s.read("px", c.initial.px);
    s.read("py", c.initial.py);
    s.read("theta", c.initial.theta);
    s.read("v", c.initial.v);
    s.finish();
  }
  if (const Json* n = root.find("vehicle")) {
    Section s(*n, "vehicle");
    s.read("wheelbase", c.vehicle.wheelbase);
    s.read("dt", c.vehicle.dt);
    s.read("body_length", c.vehicle.body_length);
    s.read("body_width", c.vehicle.body_width);
    s.finish();
  }
  if (const Json* n = root.find("weights")) {
    Section s(*n, "weights");
    s.read("q1", c.weights.q1);
    s.read("q2", c.weights.q2);
    s.read("r1", c.weights.r1);
    s.read("r2", c.weights.r2);
    s.read("terminal_scale", c.weights.terminal_scale);
    s.finish();
  }
  if (const Json* n = root.find("reference")) {
    Section s(*n, "reference");
    s.read("lateral_target", c.reference.lateral_target);
    s.read("speed", c.reference.speed);
    if (const Json* poly = s.find("polyline")) {
      if (!poly->is_array()) {
        throw ConfigError("reference.polyline: expected an array of [x, y]");
      }
      c.reference.polyline.clear();
      for (std::size_t i = 0; i < poly->size(); ++i) {
        c.reference.polyline.push_back(
            Section::to_point((*poly)[i], "reference.polyline[" + std::to_string(i) + "]"));
      }
    }
    s.finish();
  }
  if (const Json* n = root.find("bounds")) {
    Section s(*n, "bounds");
    s.read("w_max", c.bounds.w_max);
    s.read("a_max_acc", c.bounds.a_max_acc);
    s.read("a_max_dec", c.bounds.a_max_dec);
    s.finish();
  }
  std::string convention = "obstacle";
  root.read("heading_convention", convention);
  if (convention == "obstacle") {
    c.heading_convention = HeadingConvention::kObstacle;
  } else if (convention == "ego") {
    c.heading_convention = HeadingConvention::kEgo;
  } else {
    throw ConfigError("heading_convention: expected \"obstacle\" or \"ego\"");
  }
  if (const Json* n = root.find("obstacles")) {
    if (!n->is_array()) {
      throw ConfigError("obstacles: expected an array");
    }
    for (std::size_t i = 0; i < n->size(); ++i) {
      Obstacle o;
      Section s((*n)[i], "obstacles[" + std::to_string(i) + "]");
      s.read("center0", o.center0);
      s.read("velocity", o.velocity);
      s.read("heading", o.heading);
      s.read("e_a", o.e_a);
      s.read("e_b", o.e_b);
      s.finish();
      c.obstacles.push_back(o);
    }
  }
  if (const Json* n = root.find("admm")) {
    Section s(*n, "admm");
    s.read("sigma", c.admm.sigma);
    s.read("max_admm_iters", c.admm.max_admm_iters);
    s.read("primal_tolerance", c.admm.primal_tolerance);
    s.read("parallel_projection", c.admm.parallel_projection);
    read_ilqr(s, "admm.ilqr", c.admm.ilqr);
    s.finish();
  }
  if (const Json* n = root.find("barrier")) {
    Section s(*n, "barrier");
    s.read("t0", c.barrier.t0);
    s.read("kappa", c.barrier.kappa);
    s.read("outer_iters", c.barrier.outer_iters);
    s.read("epsilon", c.barrier.epsilon);
    read_ilqr(s, "barrier.ilqr", c.barrier.ilqr);
    s.finish();
  }
  root.finish();

  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_json_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_config(const ScenarioConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  out << to_json_text(config);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
}

}  // namespace admm_ilqr
