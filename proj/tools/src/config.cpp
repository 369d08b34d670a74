#include "config.hpp"

#include <fstream>

#include "spacelike/errors.hpp"
#include "spacelike/expr.hpp"

namespace spacelike::cli {

namespace {

using nlohmann::json;

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const json* find(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_vector(const json& v, const std::string& path, int size) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  if (size >= 0 && static_cast<int>(v.size()) != size)
    throw ConfigError(path, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], child(path, i)));
  return out;
}

void check_expr(const std::string& text, int m, const std::string& path) {
  try {
    (void)parse(text, m);
  } catch (const ParseError& e) {
    throw ConfigError(path, e.what());
  }
}

LatticeSpec parse_lattice(const json& v, int m, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  LatticeSpec ls;
  const json* lo = find(v, "lower");
  const json* hi = find(v, "upper");
  const json* sp = find(v, "spacing");
  if (!lo) throw ConfigError(child(path, "lower"), "required");
  if (!hi) throw ConfigError(child(path, "upper"), "required");
  if (!sp) throw ConfigError(child(path, "spacing"), "required");
  ls.lower = as_vector(*lo, child(path, "lower"), m);
  ls.upper = as_vector(*hi, child(path, "upper"), m);
  if (sp->is_number()) {
    ls.spacing.assign(static_cast<std::size_t>(m), as_number(*sp, child(path, "spacing")));
  } else {
    ls.spacing = as_vector(*sp, child(path, "spacing"), m);
  }
  for (int d = 0; d < m; ++d) {
    if (!(ls.spacing[d] > 0.0)) throw ConfigError(child(path, "spacing"), "spacing must be positive");
    if (!(ls.upper[d] > ls.lower[d])) throw ConfigError(child(child(path, "upper"), d), "upper must exceed lower");
  }
  if (const json* mk = find(v, "mask")) {
    const std::string mp = child(path, "mask");
    if (!mk->is_object()) throw ConfigError(mp, "expected an object");
    Shell s;
    s.center = find(*mk, "center") ? as_vector((*mk)["center"], child(mp, "center"), m)
                                   : std::vector<double>(static_cast<std::size_t>(m), 0.0);
    s.inner = find(*mk, "inner") ? as_number((*mk)["inner"], child(mp, "inner")) : 0.0;
    if (!find(*mk, "outer")) throw ConfigError(child(mp, "outer"), "required");
    s.outer = as_number((*mk)["outer"], child(mp, "outer"));
    if (s.inner < 0.0) throw ConfigError(child(mp, "inner"), "must be nonnegative");
    if (!(s.outer > s.inner)) throw ConfigError(child(mp, "outer"), "must exceed inner");
    ls.mask = s;
  }
  try {
    (void)ls.build();
  } catch (const LatticeError& e) {
    throw ConfigError(path, e.what());
  }
  return ls;
}

int parse_m(const json& doc, int max_m, int fallback) {
  const json* v = find(doc, "m");
  if (!v) {
    if (fallback > 0) return fallback;
    throw ConfigError("/m", "required");
  }
  const int m = as_int(*v, "/m");
  if (m < 1 || m > max_m) throw ConfigError("/m", "must be in [1, " + std::to_string(max_m) + "]");
  return m;
}

}  // namespace

Lattice LatticeSpec::build() const {
  Lattice lat(lower, upper, spacing);
  return mask ? lat.with_mask(*mask) : lat;
}

JobConfig parse_config(const json& doc, const std::string& command) {
  if (!doc.is_object()) throw ConfigError("", "top level must be an object");
  JobConfig cfg;
  cfg.command = command;
  cfg.echo = doc;
  if (const json* c = find(doc, "command")) {
    const std::string given = as_string(*c, "/command");
    if (given != command) throw ConfigError("/command", "config is for '" + given + "', invoked as '" + command + "'");
  }

  if (const json* o = find(doc, "output")) {
    if (!o->is_object()) throw ConfigError("/output", "expected an object");
    if (const json* p = find(*o, "path")) cfg.out = as_string(*p, "/output/path");
    if (const json* f = find(*o, "format")) {
      const std::string s = as_string(*f, "/output/format");
      if (s == "csv") cfg.format = Format::Csv;
      else if (s == "json") cfg.format = Format::Json;
      else throw ConfigError("/output/format", "must be csv or json");
    }
  }

  if (const json* s = find(doc, "solver")) {
    if (!s->is_object()) throw ConfigError("/solver", "expected an object");
    if (const json* v = find(*s, "tol")) cfg.solver.tol = as_number(*v, "/solver/tol");
    if (const json* v = find(*s, "max_iter")) cfg.solver.max_iter = as_int(*v, "/solver/max_iter");
    if (const json* v = find(*s, "delta_safe")) cfg.solver.delta_safe = as_number(*v, "/solver/delta_safe");
    if (!(cfg.solver.tol > 0.0)) throw ConfigError("/solver/tol", "must be positive");
    if (cfg.solver.max_iter < 1) throw ConfigError("/solver/max_iter", "must be at least 1");
    if (!(cfg.solver.delta_safe > 0.0 && cfg.solver.delta_safe < 1.0))
      throw ConfigError("/solver/delta_safe", "must lie in (0, 1)");
  }

  if (command == "check") return cfg;

  if (command == "analyze") {
    cfg.m = parse_m(doc, 8, 0);
    const json* comps = find(doc, "components");
    if (!comps) throw ConfigError("/components", "required in graph mode");
    if (!comps->is_array() || comps->empty()) throw ConfigError("/components", "expected a non-empty array of expressions");
    for (std::size_t i = 0; i < comps->size(); ++i) {
      cfg.components.push_back(as_string((*comps)[i], child("/components", i)));
      check_expr(cfg.components.back(), cfg.m, child("/components", i));
    }
    cfg.n = static_cast<int>(cfg.components.size());
    if (const json* n = find(doc, "n")) {
      if (as_int(*n, "/n") != cfg.n)
        throw ConfigError("/components", "expression count " + std::to_string(cfg.n) + " differs from n = " +
                                             std::to_string(as_int(*n, "/n")));
    }
    cfg.base_point = find(doc, "base_point") ? as_vector(doc["base_point"], "/base_point", cfg.m)
                                             : std::vector<double>(static_cast<std::size_t>(cfg.m), 0.0);
    if (const json* v = find(doc, "origin_offset")) cfg.origin_offset = as_bool(*v, "/origin_offset");
  } else if (command == "lagrangian") {
    cfg.m = parse_m(doc, 8, 0);
    const json* p = find(doc, "potential");
    if (!p) throw ConfigError("/potential", "required in potential mode");
    cfg.potential = as_string(*p, "/potential");
    check_expr(cfg.potential, cfg.m, "/potential");
    if (const json* c = find(doc, "c")) cfg.c = as_number(*c, "/c");
  } else if (command == "solve-maximal" || command == "solve-ma" || command == "scan") {
    cfg.m = parse_m(doc, 3, command == "scan" ? 2 : 0);
    const json* b = find(doc, "boundary");
    if (!b) throw ConfigError("/boundary", "required");
    cfg.boundary = as_string(*b, "/boundary");
    check_expr(cfg.boundary, cfg.m, "/boundary");
    if (command == "solve-ma") {
      if (const json* c = find(doc, "c")) cfg.c = as_number(*c, "/c");
      if (!(cfg.c > 0.0)) throw ConfigError("/c", "must be positive");
    }
  } else {
    throw ConfigError("/command", "unknown command '" + command + "'");
  }

  if (command == "scan") {
    const json* s = find(doc, "scan");
    if (!s) throw ConfigError("/scan", "required");
    if (!s->is_object()) throw ConfigError("/scan", "expected an object");
    const json* r = find(*s, "radii");
    if (!r) throw ConfigError("/scan/radii", "required");
    cfg.scan.radii = as_vector(*r, "/scan/radii", -1);
    if (cfg.scan.radii.empty()) throw ConfigError("/scan/radii", "must not be empty");
    for (std::size_t i = 0; i < cfg.scan.radii.size(); ++i) {
      if (!(cfg.scan.radii[i] > 0.0)) throw ConfigError(child("/scan/radii", i), "radii must be positive");
      if (i > 0 && !(cfg.scan.radii[i] > cfg.scan.radii[i - 1]))
        throw ConfigError(child("/scan/radii", i), "radii must be strictly increasing");
    }
    cfg.scan.center = find(*s, "center") ? as_vector((*s)["center"], "/scan/center", cfg.m)
                                         : std::vector<double>(static_cast<std::size_t>(cfg.m), 0.0);
    if (const json* v = find(*s, "spacing")) {
      cfg.scan.spacing = as_number(*v, "/scan/spacing");
      if (cfg.scan.spacing < 0.0) throw ConfigError("/scan/spacing", "must be nonnegative (0 selects nodes_per_radius)");
    }
    if (const json* v = find(*s, "nodes_per_radius")) {
      cfg.scan.nodes_per_radius = as_int(*v, "/scan/nodes_per_radius");
      if (cfg.scan.nodes_per_radius < 4) throw ConfigError("/scan/nodes_per_radius", "must be at least 4");
    }
  } else {
    const json* l = find(doc, "lattice");
    if (!l) throw ConfigError("/lattice", "required");
    cfg.lattice = parse_lattice(*l, cfg.m, "/lattice");
  }
  return cfg;
}

JobConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc, command);
}

}  // namespace spacelike::cli
