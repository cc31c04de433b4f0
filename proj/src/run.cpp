#include "uot/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "uot/analysis.hpp"
#include "uot/densities.hpp"
#include "uot/io.hpp"
#include "uot/solver.hpp"

namespace uot {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json uw2_summary(const Diagnostics &d) {
  json s;
  const double objective = d.primal.value;
  s["objective"] = number_or_null(objective);
  s["uw2"] = number_or_null(std::sqrt(2.0 * objective));
  s["infeasible"] = d.primal.infeasible;
  s["dual"] = number_or_null(d.dual);
  s["gap"] = number_or_null(d.gap);
  s["continuity_residual"] = d.continuity_residual;
  s["hj_violation"] = d.hj.max_violation;
  s["hj_equality_error"] = d.hj.max_equality_error;
  s["mass_error_f"] = d.mass.e1;
  s["mass_error_phi"] = d.mass.e2;
  if (d.pushforward) {
    s["pushforward_residual"] = d.pushforward->residual;
    s["pushforward_excluded_fraction"] = d.pushforward->excluded_fraction;
  }
  return s;
}

struct Uw1Metrics {
  double value = 0.0;
  double dual = 0.0;
  double residual = 0.0;
  // max(|grad phi| - 1, 0) over interior x-faces (1D) or 0 in 2D.
  double dual_infeasibility = 0.0;
  double delta = 0.0;
};

// Recomputes the UW1 quantities from field values; matches solve_uw1.
Uw1Metrics uw1_metrics(std::span<const double> mx, std::span<const double> my,
                       const SpatialField &phi, const SpatialField &mu0, const SpatialField &mu1,
                       double alpha) {
  const SpatialGrid &g = phi.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const bool two_d = g.dims() == 2;
  const double dx = g.dx();
  const double dy = g.dy();
  Uw1Metrics out;
  out.delta = integrate(mu1) - integrate(mu0);
  auto xi = [&](int i, int j) { return static_cast<std::size_t>(j) * (nx + 1) + i; };
  auto ci = [&](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };

  double res2 = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t c = ci(i, j);
      const double src = mu1.values()[c] - mu0.values()[c] - out.delta;
      double d = (mx[xi(i + 1, j)] - mx[xi(i, j)]) / dx;
      if (two_d) d += (my[ci(i, j + 1)] - my[ci(i, j)]) / dy;
      res2 += (d + src) * (d + src);
      out.dual += phi.values()[c] * src * g.cell_measure();
      if (!two_d) {
        if (i > 0) out.value += std::abs(mx[xi(i, j)]) * dx;
      } else {
        const double ax = 0.5 * (mx[xi(i, j)] + mx[xi(i + 1, j)]);
        const double ay = 0.5 * (my[ci(i, j)] + my[ci(i, j + 1)]);
        out.value += std::hypot(ax, ay) * dx * dy;
      }
    }
  }
  if (!two_d) {
    for (int i = 1; i < nx; ++i) {
      const double grad = (phi(i) - phi(i - 1)) / dx;
      out.dual_infeasibility = std::max(out.dual_infeasibility, std::abs(grad) - 1.0);
    }
  }
  out.residual = std::sqrt(res2 * g.cell_measure());
  out.value += std::abs(out.delta) / alpha;
  out.dual += std::abs(out.delta) / alpha;
  return out;
}

json uw1_summary(const Uw1Metrics &m) {
  return json{{"objective", m.value},
              {"uw1", m.value},
              {"dual", m.dual},
              {"gap", m.value - m.dual},
              {"dual_infeasibility", m.dual_infeasibility},
              {"continuity_residual", m.residual},
              {"hj_violation", nullptr},
              {"mass_error_f", 0.0},
              {"mass_error_phi", nullptr}};
}

std::string alpha_dir_name(double alpha) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "alpha_%g", alpha);
  return buf;
}

} // namespace

json run_single(const RunConfig &config, const std::string &dir, const KernelTable &kernels) {
  fs::create_directories(dir);
  write_json((fs::path(dir) / "config.json").string(), to_json(config));

  const SpatialGrid space = config.space();
  const SpatialField mu0 = make_density(config.mu0, space);
  const SpatialField mu1 = make_density(config.mu1, space);
  const SolverConfig solver = config.solver_config();

  const auto start = std::chrono::steady_clock::now();
  json summary;
  if (config.p == 2) {
    const TimeGrid time = config.time();
    Uw2Result r = solve_uw2(mu0, mu1, time, solver, kernels);
    const Diagnostics d = diagnose(r.state, mu0, mu1, config.alpha, config.freeze_source);
    write_state(r.state, r.reports, dir);
    summary = uw2_summary(d);
    summary["converged"] = r.converged;
    summary["iterations_run"] = r.iterations_run;
    summary["kernels"] = kernels.name;
  } else {
    Uw1Result r = solve_uw1(mu0, mu1, solver);
    write_uw1(r, dir);
    summary = uw1_summary(uw1_metrics(r.mx, r.my, r.phi, mu0, mu1, config.alpha));
    summary["source"] = r.source;
    summary["converged"] = r.converged;
    summary["iterations_run"] = r.iterations_run;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  summary["alpha"] = config.alpha;
  summary["wall_seconds"] = elapsed.count();
  write_json((fs::path(dir) / "summary.json").string(), summary);
  return summary;
}

json run(const RunConfig &config, const KernelTable &kernels) {
  const fs::path root(config.output_dir);
  json summary = run_single(config, root.string(), kernels);

  if (config.classical_baseline && config.p == 2) {
    RunConfig base = config;
    base.freeze_source = true;
    base.classical_baseline = false;
    base.alpha_sweep.clear();
    base.output_dir = (root / "baseline").string();
    const json b = run_single(base, base.output_dir, kernels);
    summary["classical_baseline"] = {{"objective", b["objective"]},
                                     {"w2", b["uw2"]},
                                     {"dual", b["dual"]},
                                     {"gap", b["gap"]},
                                     {"continuity_residual", b["continuity_residual"]},
                                     {"converged", b["converged"]},
                                     {"iterations_run", b["iterations_run"]},
                                     {"dir", "baseline"}};
  }

  if (!config.alpha_sweep.empty()) {
    json sweep = json::array();
    for (double alpha : config.alpha_sweep) {
      RunConfig c = config;
      c.alpha = alpha;
      c.alpha_sweep.clear();
      c.classical_baseline = false;
      const std::string name = alpha_dir_name(alpha);
      c.output_dir = (root / name).string();
      const json s = run_single(c, c.output_dir, kernels);
      sweep.push_back({{"alpha", alpha},
                       {"objective", s["objective"]},
                       {"converged", s["converged"]},
                       {"dir", name}});
    }
    summary["alpha_sweep"] = sweep;
  }

  if (summary.contains("classical_baseline") || summary.contains("alpha_sweep")) {
    write_json((root / "summary.json").string(), summary);
  }
  return summary;
}

json diagnose_run(const std::string &dir) {
  const RunConfig config = load_run_config((fs::path(dir) / "config.json").string());
  const SpatialGrid space = config.space();
  const SpatialField mu0 = make_density(config.mu0, space);
  const SpatialField mu1 = make_density(config.mu1, space);

  if (config.p == 2) {
    const SolverState state = read_state(dir, space, config.time());
    return uw2_summary(diagnose(state, mu0, mu1, config.alpha, config.freeze_source));
  }

  auto flat = [](const Matrix &m) {
    std::vector<double> v;
    for (const auto &row : m) v.insert(v.end(), row.begin(), row.end());
    return v;
  };
  const std::vector<double> mx = flat(read_matrix_csv(slab_file(dir, "mx", 0)));
  const std::vector<double> my =
      space.dims() == 2 ? flat(read_matrix_csv(slab_file(dir, "my", 0))) : std::vector<double>{};
  const SpatialField phi(space, flat(read_matrix_csv(slab_file(dir, "phi", 0))));
  if (mx.size() != space.x_face_count() || my.size() != space.y_face_count()) {
    throw std::runtime_error(dir + ": flux files do not match the configured grid");
  }
  return uw1_summary(uw1_metrics(mx, my, phi, mu0, mu1, config.alpha));
}

} // namespace uot
