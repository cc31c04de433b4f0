#include "uot/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "uot/solver.hpp"

#ifndef UOT_SOURCE_DIR
#define UOT_SOURCE_DIR "."
#endif

namespace uot {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<double> kDefaultSweep{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0};

json table1_problem(int dims) {
  json p{{"p", 2}, {"alpha", 100.0}, {"dims", dims}, {"n_t", 15}, {"n_x", 35}};
  if (dims == 2) p["n_y"] = 35;
  return p;
}

json table1_solver() {
  return json{{"tau1", 1e-3},         {"tau2", 1e-1},          {"iterations", 200000},
              {"tolerance", 1e-9},    {"report_every", 1000},  {"freeze_source", false}};
}

json gaussian(double mean, double variance) {
  return json{{"kind", "gaussian"}, {"mean", mean}, {"variance", variance}, {"scale", 1.0}};
}

json gaussian_2d(double mx, double my, double variance) {
  return json{{"kind", "gaussian"}, {"mean", {mx, my}}, {"variance", variance}, {"scale", 1.0}};
}

json mixture(const std::vector<std::pair<json, double>> &parts, double variance) {
  json comps = json::array();
  for (const auto &[mean, weight] : parts) {
    comps.push_back(json{{"mean", mean}, {"variance", variance}, {"weight", weight}});
  }
  return json{{"kind", "mixture"}, {"components", comps}, {"scale", 1.0}};
}

// sigma = 0.1 reproduces the reported Experiment 1 values; see README.
constexpr double kVariance = 0.01;

json make_preset(const std::string &name) {
  if (name == "exp1") {
    return json{{"preset", name},
                {"problem", table1_problem(1)},
                {"mu0", gaussian(1.0 / 3.0, kVariance)},
                {"mu1", gaussian(2.0 / 3.0, kVariance)},
                {"solver", table1_solver()},
                {"output_dir", "runs/exp1"},
                {"classical_baseline", true}};
  }
  if (name == "exp2-balanced" || name == "exp2-unbalanced") {
    const double w = name == "exp2-balanced" ? 0.5 : 1.0;
    return json{{"preset", name},
                {"problem", table1_problem(1)},
                {"mu0", mixture({{0.0, w}, {1.0 / 3.0, w}}, kVariance)},
                {"mu1", gaussian(2.0 / 3.0, kVariance)},
                {"solver", table1_solver()},
                {"output_dir", "runs/" + name},
                {"alpha_sweep", kDefaultSweep}};
  }
  if (name == "exp3") {
    return json{{"preset", name},
                {"problem", table1_problem(2)},
                {"mu0", mixture({{json{0.3, 0.3}, 1.0}, {json{0.7, 0.3}, 1.0}}, kVariance)},
                {"mu1", gaussian_2d(0.7, 0.7, kVariance)},
                {"solver", table1_solver()},
                {"output_dir", "runs/exp3"}};
  }
  if (name == "exp4") {
    return json{{"preset", name},
                {"problem", table1_problem(2)},
                {"mu0", json{{"kind", "image"}, {"path", "data/cat_sitting.pgm"}, {"scale", 1.0}}},
                {"mu1", json{{"kind", "image"}, {"path", "data/cat_lying.pgm"}, {"scale", 1.0}}},
                {"solver", table1_solver()},
                {"output_dir", "runs/exp4"}};
  }
  if (name == "exp5") {
    json solver{{"iterations", 200000}, {"tolerance", 1e-9}, {"report_every", 1000}};
    return json{{"preset", name},
                {"problem", json{{"p", 1}, {"alpha", 100.0}, {"dims", 1}, {"n_x", 35}}},
                {"mu0", mixture({{0.3, 1.0}, {0.7, 1.0}}, kVariance)},
                {"mu1", gaussian(0.5, kVariance)},
                {"solver", solver},
                {"output_dir", "runs/exp5"}};
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

void reject_unknown(const json &obj, const std::string &where, std::set<std::string> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(it.key(), "unknown key in " + where);
    }
  }
}

const json *find(const json &obj, const std::string &key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_double(const json &v, const std::string &key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(key, "expected a finite number");
  return d;
}

long as_long(const json &v, const std::string &key) {
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return static_cast<long>(d);
  }
  throw ConfigError(key, "expected an integer");
}

bool as_bool(const json &v, const std::string &key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json &v, const std::string &key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

const json &require(const json &obj, const std::string &key, const std::string &where) {
  const json *v = find(obj, key);
  if (v == nullptr) {
    throw ConfigError(key, "missing required key '" + where + key + "'");
  }
  return *v;
}

// Mean/variance accept a scalar (1D, or isotropic variance) or [x, y].
void read_pair(const json &v, const std::string &key, int dims, double &x, double &y) {
  if (v.is_array()) {
    if (v.size() != static_cast<std::size_t>(dims)) {
      throw ConfigError(key, "expected " + std::to_string(dims) + " entries");
    }
    x = as_double(v[0], key);
    y = dims == 2 ? as_double(v[1], key) : x;
    return;
  }
  x = as_double(v, key);
  y = x;
  if (key == "mean" && dims == 2) {
    throw ConfigError(key, "a 2D mean needs [x, y]");
  }
}

GaussianComponent read_component(const json &c, int dims, bool with_weight) {
  if (!c.is_object()) throw ConfigError("components", "expected an object");
  if (with_weight) reject_unknown(c, "density component", {"mean", "variance", "weight"});
  GaussianComponent g;
  read_pair(require(c, "mean", ""), "mean", dims, g.mean_x, g.mean_y);
  read_pair(require(c, "variance", ""), "variance", dims, g.variance_x, g.variance_y);
  if (with_weight) {
    if (const json *w = find(c, "weight")) g.weight = as_double(*w, "weight");
  }
  return g;
}

std::string resolve_path(const std::string &path, const std::string &base_dir,
                         const std::string &key) {
  const fs::path p(path);
  if (p.is_absolute()) {
    if (!fs::exists(p)) throw ConfigError(key, "file not found: " + path);
    return path;
  }
  for (const fs::path &root : {fs::path(base_dir), fs::path(UOT_SOURCE_DIR)}) {
    const fs::path candidate = root / p;
    if (fs::exists(candidate)) return fs::absolute(candidate).lexically_normal().string();
  }
  throw ConfigError(key, "file not found: " + path);
}

DensitySpec read_density(const json &d, const std::string &key, int dims,
                         const std::string &base_dir) {
  if (!d.is_object()) throw ConfigError(key, "expected a density object");
  DensitySpec s;
  try {
    s.kind = density_kind_from_string(as_string(require(d, "kind", key + "."), "kind"));
  } catch (const std::invalid_argument &e) {
    throw ConfigError(key, e.what());
  }
  if (const json *sc = find(d, "scale")) s.scale = as_double(*sc, "scale");
  switch (s.kind) {
  case DensitySpec::Kind::gaussian:
    reject_unknown(d, key, {"kind", "mean", "variance", "scale"});
    s.components.push_back(read_component(d, dims, false));
    break;
  case DensitySpec::Kind::mixture: {
    reject_unknown(d, key, {"kind", "components", "scale"});
    const json &comps = require(d, "components", key + ".");
    if (!comps.is_array() || comps.empty()) {
      throw ConfigError("components", "expected a non-empty array");
    }
    for (const json &c : comps) s.components.push_back(read_component(c, dims, true));
    break;
  }
  case DensitySpec::Kind::uniform:
    reject_unknown(d, key, {"kind", "scale"});
    break;
  case DensitySpec::Kind::image:
  case DensitySpec::Kind::csv:
    reject_unknown(d, key, {"kind", "path", "scale"});
    s.path = resolve_path(as_string(require(d, "path", key + "."), "path"), base_dir, "path");
    break;
  }
  try {
    s.validate(dims);
  } catch (const std::invalid_argument &e) {
    const std::string msg = e.what();
    std::string field = msg.substr(0, msg.find(' '));
    if (!field.empty() && field.back() == ':') field.pop_back();
    throw ConfigError(field, key + ": " + msg);
  }
  return s;
}

json density_to_json(const DensitySpec &s, int dims) {
  auto pair = [&](double x, double y) { return dims == 2 ? json{x, y} : json(x); };
  json d{{"kind", to_string(s.kind)}, {"scale", s.scale}};
  switch (s.kind) {
  case DensitySpec::Kind::gaussian: {
    const auto &c = s.components.front();
    d["mean"] = pair(c.mean_x, c.mean_y);
    d["variance"] = pair(c.variance_x, c.variance_y);
    break;
  }
  case DensitySpec::Kind::mixture: {
    json comps = json::array();
    for (const auto &c : s.components) {
      comps.push_back(json{{"mean", pair(c.mean_x, c.mean_y)},
                           {"variance", pair(c.variance_x, c.variance_y)},
                           {"weight", c.weight}});
    }
    d["components"] = comps;
    break;
  }
  case DensitySpec::Kind::uniform:
    break;
  case DensitySpec::Kind::image:
  case DensitySpec::Kind::csv:
    d["path"] = s.path;
    break;
  }
  return d;
}

// Nested problem/solver objects merge per key; everything else replaces.
json merge_over_preset(const json &doc) {
  json out = json::object();
  if (const json *p = find(doc, "preset")) {
    const std::string name = as_string(*p, "preset");
    if (name != "custom") out = make_preset(name);
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if ((it.key() == "problem" || it.key() == "solver") && it->is_object() &&
        out.contains(it.key())) {
      for (auto jt = it->begin(); jt != it->end(); ++jt) out[it.key()][jt.key()] = *jt;
    } else {
      out[it.key()] = *it;
    }
  }
  return out;
}

} // namespace

SpatialGrid RunConfig::space() const {
  return dims == 2 ? SpatialGrid(n_x, n_y) : SpatialGrid(n_x);
}

TimeGrid RunConfig::time() const { return TimeGrid(n_t); }

SolverConfig RunConfig::solver_config() const {
  SolverConfig c;
  c.p = p;
  c.alpha = alpha;
  const double step = p == 1 ? uw1_default_step(space()) : 0.0;
  c.tau1 = tau1 > 0.0 ? tau1 : step;
  c.tau2 = tau2 > 0.0 ? tau2 : step;
  c.max_iterations = iterations;
  c.tolerance = tolerance;
  c.report_every = report_every;
  c.freeze_source = freeze_source;
  return c;
}

const std::vector<std::string> &preset_names() {
  static const std::vector<std::string> names{"exp1", "exp2-balanced", "exp2-unbalanced",
                                              "exp3", "exp4",          "exp5"};
  return names;
}

json preset_json(const std::string &name) { return make_preset(name); }

RunConfig parse_run_config(const json &input, const std::string &base_dir) {
  if (!input.is_object()) throw ConfigError("config", "expected a JSON object");
  reject_unknown(input, "config",
                 {"preset", "problem", "mu0", "mu1", "solver", "output_dir", "alpha_sweep",
                  "classical_baseline"});
  const json doc = merge_over_preset(input);
  RunConfig c;
  if (const json *p = find(doc, "preset")) c.preset = as_string(*p, "preset");

  const json &problem = require(doc, "problem", "");
  if (!problem.is_object()) throw ConfigError("problem", "expected an object");
  reject_unknown(problem, "problem", {"p", "alpha", "dims", "n_t", "n_x", "n_y"});
  c.p = static_cast<int>(as_long(require(problem, "p", "problem."), "p"));
  if (c.p != 1 && c.p != 2) throw ConfigError("p", "must be 1 or 2");
  c.alpha = as_double(require(problem, "alpha", "problem."), "alpha");
  if (!(c.alpha > 0.0)) throw ConfigError("alpha", "must be > 0");
  c.dims = static_cast<int>(as_long(require(problem, "dims", "problem."), "dims"));
  if (c.dims != 1 && c.dims != 2) throw ConfigError("dims", "must be 1 or 2");
  c.n_x = static_cast<int>(as_long(require(problem, "n_x", "problem."), "n_x"));
  if (c.n_x < 2) throw ConfigError("n_x", "must be >= 2");
  if (c.dims == 2) {
    c.n_y = static_cast<int>(as_long(require(problem, "n_y", "problem."), "n_y"));
    if (c.n_y < 2) throw ConfigError("n_y", "must be >= 2");
  } else {
    c.n_y = 1;
  }
  if (c.p == 2) {
    c.n_t = static_cast<int>(as_long(require(problem, "n_t", "problem."), "n_t"));
    if (c.n_t < 3) throw ConfigError("n_t", "must be >= 3");
  } else if (const json *nt = find(problem, "n_t")) {
    c.n_t = static_cast<int>(as_long(*nt, "n_t"));
  }

  c.mu0 = read_density(require(doc, "mu0", ""), "mu0", c.dims, base_dir);
  c.mu1 = read_density(require(doc, "mu1", ""), "mu1", c.dims, base_dir);

  const json &solver = require(doc, "solver", "");
  if (!solver.is_object()) throw ConfigError("solver", "expected an object");
  reject_unknown(solver, "solver",
                 {"tau1", "tau2", "iterations", "tolerance", "report_every", "freeze_source"});
  for (const char *key : {"tau1", "tau2"}) {
    const json *v = find(solver, key);
    double value = 0.0;
    if (v != nullptr) {
      value = as_double(*v, key);
      if (!(value > 0.0)) throw ConfigError(key, "must be > 0");
    } else if (c.p == 2) {
      throw ConfigError(key, std::string("missing required key 'solver.") + key + "'");
    }
    (std::string(key) == "tau1" ? c.tau1 : c.tau2) = value;
  }
  c.iterations = as_long(require(solver, "iterations", "solver."), "iterations");
  if (c.iterations < 1) throw ConfigError("iterations", "must be >= 1");
  if (const json *v = find(solver, "tolerance")) c.tolerance = as_double(*v, "tolerance");
  if (!(c.tolerance > 0.0)) throw ConfigError("tolerance", "must be > 0");
  if (const json *v = find(solver, "report_every")) c.report_every = as_long(*v, "report_every");
  if (c.report_every < 1) throw ConfigError("report_every", "must be >= 1");
  if (const json *v = find(solver, "freeze_source")) c.freeze_source = as_bool(*v, "freeze_source");
  if (c.freeze_source && c.p == 1) throw ConfigError("freeze_source", "only applies to p = 2");

  if (const json *v = find(doc, "output_dir")) c.output_dir = as_string(*v, "output_dir");
  if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  if (const json *v = find(doc, "alpha_sweep")) {
    if (!v->is_array()) throw ConfigError("alpha_sweep", "expected an array of numbers");
    for (const json &a : *v) {
      const double alpha = as_double(a, "alpha_sweep");
      if (!(alpha > 0.0)) throw ConfigError("alpha_sweep", "entries must be > 0");
      c.alpha_sweep.push_back(alpha);
    }
  }
  if (const json *v = find(doc, "classical_baseline")) {
    c.classical_baseline = as_bool(*v, "classical_baseline");
  }
  if (c.classical_baseline && c.p != 2) {
    throw ConfigError("classical_baseline", "only applies to p = 2");
  }
  return c;
}

RunConfig load_run_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  const fs::path parent = fs::path(path).parent_path();
  return parse_run_config(doc, parent.empty() ? "." : parent.string());
}

json to_json(const RunConfig &c) {
  json problem{{"p", c.p}, {"alpha", c.alpha}, {"dims", c.dims}, {"n_x", c.n_x}};
  if (c.p == 2) problem["n_t"] = c.n_t;
  if (c.dims == 2) problem["n_y"] = c.n_y;
  json solver{{"iterations", c.iterations},
              {"tolerance", c.tolerance},
              {"report_every", c.report_every},
              {"freeze_source", c.freeze_source}};
  if (c.tau1 > 0.0) solver["tau1"] = c.tau1;
  if (c.tau2 > 0.0) solver["tau2"] = c.tau2;
  json out{{"preset", c.preset},
           {"problem", problem},
           {"mu0", density_to_json(c.mu0, c.dims)},
           {"mu1", density_to_json(c.mu1, c.dims)},
           {"solver", solver},
           {"output_dir", c.output_dir},
           {"classical_baseline", c.classical_baseline}};
  out["alpha_sweep"] = c.alpha_sweep;
  return out;
}

} // namespace uot
