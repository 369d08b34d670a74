#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <thread>

#include "report.hpp"
#include "spacelike/battery.hpp"
#include "spacelike/bernstein.hpp"
#include "spacelike/errors.hpp"
#include "spacelike/geometry.hpp"
#include "spacelike/grassmann.hpp"
#include "spacelike/intrinsic.hpp"
#include "spacelike/lagrangian.hpp"

#ifndef SPACELIKE_VERSION
#define SPACELIKE_VERSION "0.0.0"
#endif

namespace spacelike::cli {

namespace {

using nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Rows land in fixed slots, so the thread count never changes the output.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const int t = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(n, 1))));
  if (t == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int k = 0; k < t; ++k)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  std::string path;
};

void open_sink(Sink& s, const std::string& path) {
  s.path = path;
  if (path.empty() || path == "-") return;
  s.file.open(path, std::ios::binary);
  if (!s.file) throw ConfigError("/output/path", "cannot open '" + path + "' for writing");
  s.os = &s.file;
}

json base_meta(const JobConfig& cfg) {
  return json{{"command", cfg.command}, {"version", version()}, {"config", cfg.echo}};
}

std::vector<std::size_t> mask_nodes(const Lattice& lat) {
  std::vector<std::size_t> nodes;
  for (std::size_t node = 0; node < lat.size(); ++node)
    if (lat.in_mask(node)) nodes.push_back(node);
  return nodes;
}

std::vector<Cell> nan_cells(std::size_t k) { return std::vector<Cell>(k, Cell(kNaN)); }

int cmd_analyze(const JobConfig& cfg, const RunOptions& opt, Table& t, json& meta, std::ostream& err) {
  const int m = cfg.m, n = cfg.n;
  const GraphMap raw = GraphMap::parse(m, cfg.components);
  const Lattice lat = cfg.lattice->build();

  std::optional<GraphMap> based;
  std::string based_error;
  if (cfg.origin_offset) {
    try {
      based = raw.with_origin_offset();
    } catch (const Error& e) {
      based_error = e.what();
    }
  } else {
    based = raw;
  }
  std::optional<SpacelikePlane> ref;
  try {
    ref = gauss_map(raw, cfg.base_point);
  } catch (const Error& e) {
    err << "warning: no reference plane at the base point (" << e.what() << ")\n";
  }

  t.columns = {"node"};
  for (int d = 1; d <= m; ++d) t.columns.push_back("x" + std::to_string(d));
  t.columns.push_back("status");
  t.columns.push_back("spacelike");
  for (int d = 1; d <= m; ++d) t.columns.push_back("metric_eig" + std::to_string(d));
  for (const char* c : {"H_norm", "S", "ricci_margin"}) t.columns.push_back(c);
  for (int s = 1; s <= n; ++s) t.columns.push_back("extremal_residual" + std::to_string(s));
  for (const char* c : {"gauss_distance", "z", "z_ratio"}) t.columns.push_back(c);
  if (opt.oracle) t.columns.push_back("gauss_oracle_dev");
  const std::size_t tail = t.columns.size() - static_cast<std::size_t>(m) - 3;

  const std::vector<std::size_t> nodes = mask_nodes(lat);
  t.rows.assign(nodes.size(), {});
  parallel_for(nodes.size(), opt.threads, [&](std::size_t i) {
    const std::size_t node = nodes[i];
    const auto x = lat.position(node);
    std::vector<Cell> row{static_cast<std::int64_t>(node)};
    for (double v : x) row.emplace_back(v);
    try {
      const LocalGraph lg = raw.local(x);
      const MetricPoint mp = induced_metric(lg);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mp.g, Eigen::EigenvaluesOnly);
      if (!mp.spacelike) {
        row.emplace_back(std::string("not-spacelike"));
        row.emplace_back(std::int64_t{0});
        for (int d = 0; d < m; ++d) row.emplace_back(es.eigenvalues()(d));
        const auto rest = nan_cells(tail - 1 - static_cast<std::size_t>(m));
        row.insert(row.end(), rest.begin(), rest.end());
        t.rows[i] = std::move(row);
        return;
      }
      const PointGeometry pg = curvature(lg);
      const Eigen::VectorXd res = extremal_residual(lg);
      double gd = kNaN, z = kNaN, ratio = kNaN;
      std::string status = "ok";
      if (ref) gd = distance(*ref, SpacelikePlane::from_slope(lg.jac));
      else status = "partial: no reference plane";
      if (based) {
        try {
          const PseudoDistancePoint pd = pseudo_distance(*based, x);
          z = pd.z;
          ratio = pd.ratio;
        } catch (const BasePointError& e) {
          status = "partial: " + std::string(e.what());
        }
      } else {
        status = "partial: pseudo-distance unavailable (" + based_error + ")";
      }
      row.emplace_back(status);
      row.emplace_back(std::int64_t{1});
      for (int d = 0; d < m; ++d) row.emplace_back(es.eigenvalues()(d));
      row.emplace_back(pg.H_norm);
      row.emplace_back(pg.S);
      row.emplace_back(ricci_bound_margin(pg));
      for (int s = 0; s < n; ++s) row.emplace_back(res(s));
      row.emplace_back(gd);
      row.emplace_back(z);
      row.emplace_back(ratio);
      if (opt.oracle) {
        const Tensor4 coord = change_frame(coordinate_riemann(graph_metric_derivatives(lg)), pg.frames.tangent_coeffs);
        row.emplace_back(max_abs_diff(coord, pg.riemann) / std::max(1.0, pg.riemann.max_abs()));
      }
    } catch (const Error& e) {
      row.resize(static_cast<std::size_t>(m) + 1);
      row.emplace_back(std::string("error: ") + e.what());
      row.emplace_back(std::int64_t{0});
      const auto rest = nan_cells(tail - 1);
      row.insert(row.end(), rest.begin(), rest.end());
    }
    t.rows[i] = std::move(row);
  });

  std::size_t warnings = 0;
  for (const auto& row : t.rows)
    if (std::get<std::string>(row[static_cast<std::size_t>(m) + 1]) != "ok") ++warnings;
  if (warnings) err << "warning: " << warnings << " of " << t.rows.size() << " nodes flagged (see status column)\n";
  meta["warnings"] = warnings;
  return kExitOk;
}

int cmd_lagrangian(const JobConfig& cfg, const RunOptions& opt, Table& t, json& meta, std::ostream& err) {
  const int m = cfg.m;
  const Potential pot = Potential::parse(m, cfg.potential, cfg.c);
  const Lattice lat = cfg.lattice->build();

  t.columns = {"node"};
  for (int d = 1; d <= m; ++d) t.columns.push_back("x" + std::to_string(d));
  for (const char* c : {"status", "convex", "min_metric_eig", "det_g"}) t.columns.push_back(c);
  for (int i = 1; i <= m; ++i)
    for (int j = i; j <= m; ++j) t.columns.push_back("g_" + std::to_string(i) + "_" + std::to_string(j));
  for (int k = 1; k <= m; ++k)
    for (int i = 1; i <= m; ++i)
      for (int j = i; j <= m; ++j)
        t.columns.push_back("B_" + std::to_string(k) + "_" + std::to_string(i) + "_" + std::to_string(j));
  for (int k = 1; k <= m; ++k) t.columns.push_back("H_" + std::to_string(k));
  for (const char* c : {"H_norm", "S", "ma_residual", "scalar_curvature", "min_ricci_eig"}) t.columns.push_back(c);
  if (opt.oracle) t.columns.push_back("riemann_oracle_dev");

  const std::vector<std::size_t> nodes = mask_nodes(lat);
  t.rows.assign(nodes.size(), {});
  parallel_for(nodes.size(), opt.threads, [&](std::size_t i) {
    const std::size_t node = nodes[i];
    const auto x = lat.position(node);
    std::vector<Cell> row{static_cast<std::int64_t>(node)};
    for (double v : x) row.emplace_back(v);
    const std::size_t width = t.columns.size();
    try {
      const PotentialJet j = potential_jet(pot, x);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j.hess, Eigen::EigenvaluesOnly);
      const double me = es.eigenvalues().minCoeff();
      const double mar = ma_residual(j, pot.c);
      if (!(me > 0.0)) {
        row.emplace_back(std::string("not-convex"));
        row.emplace_back(std::int64_t{0});
        row.emplace_back(me);
        row.emplace_back(j.hess.determinant());
        while (row.size() < width) row.emplace_back(kNaN);
        row[t.columns.size() - (opt.oracle ? 4 : 3)] = mar;
        t.rows[i] = std::move(row);
        return;
      }
      const LagrangianForms lf = lagrangian_forms(j);
      const ModuliCurvature mc = moduli_curvature(j);
      row.emplace_back(std::string("ok"));
      row.emplace_back(std::int64_t{1});
      row.emplace_back(me);
      row.emplace_back(lf.det_g);
      for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) row.emplace_back(lf.g(a, b));
      for (int k = 0; k < m; ++k)
        for (int a = 0; a < m; ++a)
          for (int b = a; b < m; ++b) row.emplace_back(lf.B(k, a, b));
      for (int k = 0; k < m; ++k) row.emplace_back(lf.H(k));
      row.emplace_back(lf.H_norm);
      row.emplace_back(lf.S);
      row.emplace_back(mar);
      row.emplace_back(mc.scalar);
      row.emplace_back(mc.min_ricci_eig);
      if (opt.oracle) {
        const Tensor4 oracle = hessian_metric_riemann(pot, x);
        row.emplace_back(max_abs_diff(mc.riemann, oracle) / std::max(1.0, oracle.max_abs()));
      }
    } catch (const Error& e) {
      row.resize(static_cast<std::size_t>(m) + 1);
      row.emplace_back(std::string("error: ") + e.what());
      row.emplace_back(std::int64_t{0});
      while (row.size() < width) row.emplace_back(kNaN);
    }
    t.rows[i] = std::move(row);
  });

  std::size_t flagged = 0;
  for (const auto& row : t.rows)
    if (std::get<std::string>(row[static_cast<std::size_t>(m) + 1]) != "ok") ++flagged;
  if (flagged) err << "warning: " << flagged << " of " << t.rows.size() << " nodes flagged (see status column)\n";
  meta["warnings"] = flagged;
  return kExitOk;
}

Table log_table(const SolveResult& r) {
  Table t;
  t.columns = {"record", "iteration", "lambda", "residual", "step"};
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    const auto& l = r.log[i];
    t.rows.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(l.iteration), l.lambda, l.residual, l.step});
  }
  return t;
}

int cmd_solve(const JobConfig& cfg, const RunOptions& opt, Format fmt, Table& t, json& meta, std::ostream& err,
              const std::string& out_path) {
  const Lattice lat = cfg.lattice->build();
  const Expr boundary = parse(cfg.boundary, cfg.m);
  SolveResult r;
  try {
    r = cfg.command == "solve-ma" ? solve_ma(lat, boundary, cfg.c, cfg.solver) : solve_maximal(lat, boundary, cfg.solver);
  } catch (const SolverError& e) {
    err << "error: solver failed: " << e.what() << '\n';
    return kExitNumerical;
  }
  t = field_table(r.field);
  meta["lattice"] = lattice_json(lat);
  meta["residual"] = r.residual;
  meta["iterations"] = r.iterations;
  meta["continuation_steps"] = r.continuation_steps;
  if (cfg.command == "solve-maximal") meta["max_midpoint_gradient"] = max_midpoint_gradient(r.field);
  else meta["min_discrete_hessian_eig"] = min_discrete_hessian_eig(r.field);

  const Table lt = log_table(r);
  if (out_path.empty() || out_path == "-") {
    write_csv(err, lt);
  } else {
    const std::string lp = out_path + (fmt == Format::Csv ? ".log.csv" : ".log.json");
    std::ofstream lf(lp, std::ios::binary);
    if (!lf) throw ConfigError("/output/path", "cannot open '" + lp + "' for writing");
    write_table(lf, lt, fmt, json{{"command", cfg.command}, {"version", version()}});
  }
  (void)opt;
  return kExitOk;
}

int cmd_scan(const JobConfig& cfg, const RunOptions& opt, Table& t, json& meta, std::ostream& err) {
  DecayOptions dopt;
  dopt.m = cfg.m;
  dopt.center = cfg.scan.center;
  dopt.spacing = cfg.scan.spacing;
  dopt.nodes_per_radius = cfg.scan.nodes_per_radius;
  dopt.solver = cfg.solver;
  dopt.threads = opt.threads;
  const DecayReport rep = decay_scan(parse(cfg.boundary, cfg.m), cfg.scan.radii, dopt);

  std::string slope = "undefined";
  if (rep.exact_zero) slope = "exact-zero";
  else if (rep.slope) slope = format_number(*rep.slope);
  t.columns = {"a", "h", "S_center", "status", "iterations", "residual", "slope"};
  int failed = 0;
  for (const auto& row : rep.rows) {
    failed += row.ok ? 0 : 1;
    t.rows.push_back({row.a, row.h, row.ok ? Cell(row.S_center) : Cell(kNaN), row.status,
                      static_cast<std::int64_t>(row.iterations), row.ok ? Cell(row.residual) : Cell(kNaN), slope});
  }
  meta["slope"] = slope;
  if (failed) {
    err << "error: " << failed << " of " << rep.rows.size() << " radii failed (see status column)\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_check(const RunOptions& opt, Table& t, json& meta, std::ostream& err) {
  const std::vector<CheckResult> results = run_check_suite(opt.seed);
  t.columns = {"suite", "name", "value", "tolerance", "status", "detail"};
  int failed = 0;
  for (const auto& r : results) {
    failed += r.passed ? 0 : 1;
    t.rows.push_back({r.suite, r.name, r.value, r.tolerance, std::string(r.passed ? "pass" : "fail"), r.detail});
    err << (r.passed ? "pass  " : "FAIL  ") << r.suite << '/' << r.name << '\n';
  }
  meta["seed"] = opt.seed;
  meta["failures"] = failed;
  return failed ? kExitInvariant : kExitOk;
}

}  // namespace

const char* version() { return SPACELIKE_VERSION; }

int run_command(const std::string& command, const RunOptions& opt, std::ostream& err) {
  try {
    JobConfig cfg;
    if (opt.config_path.empty()) {
      if (command != "check") throw ConfigError("", "--config is required for '" + command + "'");
      cfg = parse_config(json::object(), command);
    } else {
      cfg = load_config(opt.config_path, command);
    }
    const Format fmt = opt.format.value_or(cfg.format.value_or(Format::Csv));
    const std::string out_path = opt.out.empty() ? cfg.out : opt.out;

    Table t;
    json meta = base_meta(cfg);
    int code = kExitOk;
    if (command == "analyze") code = cmd_analyze(cfg, opt, t, meta, err);
    else if (command == "lagrangian") code = cmd_lagrangian(cfg, opt, t, meta, err);
    else if (command == "solve-maximal" || command == "solve-ma") code = cmd_solve(cfg, opt, fmt, t, meta, err, out_path);
    else if (command == "scan") code = cmd_scan(cfg, opt, t, meta, err);
    else if (command == "check") code = cmd_check(opt, t, meta, err);
    else throw ConfigError("/command", "unknown command '" + command + "'");

    if (code == kExitNumerical && t.columns.empty()) return code;
    Sink sink;
    open_sink(sink, out_path);
    write_table(*sink.os, t, fmt, meta);
    sink.os->flush();
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace spacelike::cli
