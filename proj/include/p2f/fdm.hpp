#pragma once

#include "p2f/config.hpp"
#include "p2f/tank.hpp"
#include "p2f/trajectory.hpp"

namespace p2f {

struct MomentumStepResult {
  double v = 0.0;
  bool converged = true;
  int iterations = 0;
};

// One semi-implicit momentum step with Picard iteration on the frozen
// friction coefficient:  L (v' - v)/dt = g*dh - (K*/2) |v_k| v'.
// The result is clamped at >= 0.
MomentumStepResult momentum_step_reference(double v_n, double dh, double dt,
                                           const TankNetworkConfig& cfg,
                                           const FdmConfig& fdm);

// Integrates the fixed-head momentum ODE over [0, T] with
// substeps * max(1, T/dt) sub-intervals; reference curve for the
// standalone PINN comparison.
struct OdeSample {
  double t;
  double v;
};
std::vector<OdeSample> momentum_ode_oracle(double v0, double dh, double T,
                                           const TankNetworkConfig& cfg,
                                           const FdmConfig& fdm);

// Explicit mass-conservation update. Outflows are limited sequentially
// upstream-to-downstream so no level goes below zero; levels are finally
// clamped to [0, tank_height].
Eigen::VectorXd mass_step(const SystemState& state,
                          const Eigen::VectorXd& v_new,
                          const Eigen::VectorXd& voids, double dt,
                          const TankNetworkConfig& cfg);

// Reference coupled solver: velocities first from start-of-step levels,
// then the mass update, matching the hybrid marcher's stage order.
Trajectory fdm_simulate(const SystemState& initial,
                        const TankNetworkConfig& cfg, const FdmConfig& fdm);

}  // namespace p2f
