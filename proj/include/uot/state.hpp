#pragma once

#include <stdexcept>
#include <string>

#include "uot/densities.hpp"
#include "uot/grid.hpp"

namespace uot {

struct SolverConfig {
  int p = 2;
  double alpha = 100.0;
  // Primal and dual step sizes. For p = 1 see uw1_default_step.
  double tau1 = 1e-3;
  double tau2 = 1e-1;
  long max_iterations = 200000;
  double tolerance = 1e-6;
  long report_every = 1000;
  // Keep f at its initial value (zero) for the classical balanced problem.
  bool freeze_source = false;

  // Throws std::invalid_argument whose message starts with the key name.
  void validate() const;
};

// Primal-dual iterate. Pinned slabs 0 and n_t - 1 of mu hold the endpoint
// densities.
struct SolverState {
  FaceField m;
  CellField mu;
  SourceSeries f;
  CellField phi;
  FaceField m_bar;
  CellField mu_bar;
  SourceSeries f_bar;

  // Linear path between the endpoints, zero flux, zero potential, and a
  // constant source carrying the mass difference over the pinned interval
  // (zero when the source is frozen).
  static SolverState initial(const SpatialField &mu0, const SpatialField &mu1,
                             const TimeGrid &time, bool freeze_source);
};

struct IterationReport {
  long iteration = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double continuity_residual = 0.0;
  double hj_violation = 0.0;
  double hj_equality = 0.0;
  double mass_error_f = 0.0;
  double mass_error_phi = 0.0;
};

class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string &update, long iteration)
      : std::runtime_error("non-finite values after the " + update + " update at iteration " +
                           std::to_string(iteration)),
        update_(update), iteration_(iteration) {}

  const std::string &update() const { return update_; }
  long iteration() const { return iteration_; }

private:
  std::string update_;
  long iteration_;
};

} // namespace uot
