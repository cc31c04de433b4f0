#pragma once

// Optimality diagnostics for a UW2 iterate: objectives, duality gap,
// continuity and Hamilton-Jacobi residuals, mass identities and the 1D
// push-forward relation.

#include <optional>

#include "uot/state.hpp"

namespace uot {

// Density below which a cell counts as empty in the kinetic term.
inline constexpr double kEmptyDensity = 1e-12;

struct PrimalObjective {
  double value = 0.0;
  // Some cell carries flux with (numerically) zero density; value is +inf.
  bool infeasible = false;
};

// 1/2 sum |m_cell|^2 / mu dx dy dt + 1/(2 alpha) sum f^2 dt, where m_cell
// averages the two opposing faces of each cell.
PrimalObjective primal_objective(const FaceField &m, const CellField &mu, const SourceSeries &f,
                                 double alpha);
PrimalObjective primal_objective(const SolverState &state, double alpha);

// Lagrangian dual value of phi, assuming the Hamilton-Jacobi inequality on
// the free slabs:
//   - sum_{k in {0, nt-1}} mu_k (dt_phi(phi)_k + 1/2 |grad phi_k|^2) dx dy dt
//   - alpha/2 sum_k (int phi_k)^2 dt
// with mu_0 = mu0, mu_{nt-1} = mu1 and |grad|^2 averaged over the faces of
// each cell.
double dual_objective(const CellField &phi, const SpatialField &mu0, const SpatialField &mu1,
                      double alpha);

double duality_gap(const SolverState &state, const SpatialField &mu0, const SpatialField &mu1,
                   double alpha);

// sqrt(sum (dt_u(mu) + div m - f)^2 dx dy dt).
double continuity_residual(const FaceField &m, const CellField &mu, const SourceSeries &f);
double continuity_residual(const SolverState &state);

struct HjResidual {
  // max(r, 0) over the free time slabs.
  double max_violation = 0.0;
  // max |r| over free-slab cells with mu > eps.
  double max_equality_error = 0.0;
};

// r = dt_phi(phi) + 1/2 |grad phi|^2 with face-averaged squares. Slabs 0 and
// n_t - 1 are excluded: their density is prescribed, not optimized.
HjResidual hj_residual(const CellField &phi, const CellField &mu, double eps);

struct MassIdentities {
  // sum_k w_k f_k - (M1 - M0)
  double e1 = 0.0;
  // alpha sum_k w_k int phi_k - (M1 - M0)
  double e2 = 0.0;
};

// Time quadrature uses pinned_interval_weights: the interval between the
// two pinned slabs is where the discrete continuity equation transports
// mass.
MassIdentities mass_identities(const SolverState &state, const SpatialField &mu0,
                               const SpatialField &mu1, double alpha);

struct PushforwardResidual {
  double residual = 0.0;
  // Cells whose image left [x_0, x_{n-1}]; excluded from the norm.
  double excluded_fraction = 0.0;
};

// 1D only. The transport map M follows the characteristics of grad phi from
// slab 0 across the pinned interval (explicit Euler, velocity linearly
// interpolated between cell centres). Residual per cell:
//   mu1(M) M' - mu0 - sum_k w_k f_k (s_k M' + 1 - s_k),  s_k = k / (n_t - 1)
// L1 norm over the cells whose image stays inside.
PushforwardResidual pushforward_residual_1d(const SolverState &state, const SpatialField &mu0,
                                            const SpatialField &mu1);

struct Diagnostics {
  PrimalObjective primal;
  double dual = 0.0;
  double gap = 0.0;
  double continuity_residual = 0.0;
  HjResidual hj;
  MassIdentities mass;
  std::optional<PushforwardResidual> pushforward;
};

// HJ equality is measured where mu > hj_eps. With a frozen source the dual
// has no source penalty (the f-minimization is not part of the problem).
Diagnostics diagnose(const SolverState &state, const SpatialField &mu0, const SpatialField &mu1,
                     double alpha, bool frozen_source = false, double hj_eps = 1e-3);

IterationReport make_report(long iteration, const SolverState &state, const SpatialField &mu0,
                            const SpatialField &mu1, double alpha, bool frozen_source = false);

} // namespace uot
