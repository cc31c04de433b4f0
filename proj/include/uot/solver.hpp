#pragma once

// Primal-dual solvers for UW2 (time-dependent) and UW1 (time integrated out).

#include <vector>

#include "uot/kernels.hpp"
#include "uot/state.hpp"

namespace uot {

// One primal-dual iteration with reusable scratch space. Reads the previous
// iterate in all three primal updates, extrapolates, then ascends phi.
class Uw2Stepper {
public:
  Uw2Stepper(const SpatialGrid &space, const TimeGrid &time, const SolverConfig &config,
             const KernelTable &kernels = active_kernels());

  // `iteration` is only used to label a DivergenceError.
  void step(SolverState &state, long iteration = 0);

private:
  SolverConfig config_;
  const KernelTable &kernels_;
  FaceField m_next_;
  CellField mu_next_;
  SourceSeries f_next_;
  CellField dphi_;
};

void pd_step_uw2(SolverState &state, const SolverConfig &config);

struct Uw2Result {
  SolverState state;
  std::vector<IterationReport> reports;
  // J = 1/2 sum |m|^2/mu + 1/(2 alpha) sum f^2 (integrated).
  double objective = 0.0;
  // sqrt(2 J).
  double uw2 = 0.0;
  bool infeasible = false;
  bool converged = false;
  long iterations_run = 0;
};

// Reports are taken at iteration 0, every report_every iterations and after
// the last iteration. Converged when |gap| <= tolerance (1 + |primal|) and
// the continuity residual <= tolerance at a report.
Uw2Result solve_uw2(const SpatialField &mu0, const SpatialField &mu1, const TimeGrid &time,
                    const SolverConfig &config, const KernelTable &kernels = active_kernels());

struct Uw1Report {
  long iteration = 0;
  double value = 0.0;
  double constraint_residual = 0.0;
};

struct Uw1Result {
  // x-faces: (nx + 1) per row, ny rows; y-faces: nx per row, ny + 1 rows
  // (empty in 1D). Boundary faces are zero.
  std::vector<double> mx;
  std::vector<double> my;
  SpatialField phi;
  double value = 0.0;
  // Constant source; equals M1 - M0 on the unit domain.
  double source = 0.0;
  double constraint_residual = 0.0;
  bool converged = false;
  long iterations_run = 0;
  std::vector<Uw1Report> reports;
};

// min(dx, dy) / sqrt(8) in 1D, min(dx, dy) / sqrt(8 + min^2) in 2D; both keep
// tau * sigma * |K|^2 < 1 for the respective operators.
double uw1_default_step(const SpatialGrid &grid);

// min sum |m| dx dy + |M1 - M0| / alpha subject to
//   div m + (mu1 - mu0 + M0 - M1) = 0.
// In 1D the norm is taken per interior face; in 2D per cell, of the
// face-averaged flux vector. Converged when the constraint residual is
// below tolerance and the value moved by less than tolerance (1 + value)
// over the last report stride.
Uw1Result solve_uw1(const SpatialField &mu0, const SpatialField &mu1, const SolverConfig &config);

// integral_0^1 |F1(x) - F0(x) - x D| dx + |D| / alpha, D = M1 - M0, with the
// cumulative masses F taken at cell faces and the integral by the
// trapezoid rule over faces.
double uw1_closed_form_1d(const SpatialField &mu0, const SpatialField &mu1, double alpha);

} // namespace uot
