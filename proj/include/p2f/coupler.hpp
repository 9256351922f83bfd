#pragma once

#include "p2f/config.hpp"
#include "p2f/fdm.hpp"
#include "p2f/model.hpp"
#include "p2f/tank.hpp"
#include "p2f/trajectory.hpp"

#include <functional>

namespace p2f {

// Velocity update for one flow path: (dh, v0, dt) -> v at t=dt. The hybrid
// marcher is generic in this so the trained network and the ODE oracle are
// interchangeable.
using VelocityFn = std::function<double(double dh, double v0, double dt)>;

VelocityFn pinn_velocity_fn(const MlpModel& model);
VelocityFn oracle_velocity_fn(const TankNetworkConfig& cfg,
                              const FdmConfig& fdm);

// One hybrid step: per flow path, dh and void fraction from start-of-step
// levels, velocity from the predictor (dry paths decay with dh = 0), then
// the shared mass update.
SystemState p2f_step(const SystemState& state, double dt,
                     const VelocityFn& velocity, const TankNetworkConfig& cfg);

// floor(t_end/dt) hybrid steps, every state recorded. dt must not exceed
// max_dt (the model's training window) when one applies.
Trajectory p2f_simulate(const SystemState& initial, double dt, double t_end,
                        const VelocityFn& velocity,
                        const TankNetworkConfig& cfg,
                        double max_dt = 0.0 /* 0 = unconstrained */);

}  // namespace p2f
