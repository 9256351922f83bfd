#include "p2f/coupler.hpp"

#include "p2f/napinn.hpp"

#include <cmath>
#include <stdexcept>

namespace p2f {

VelocityFn pinn_velocity_fn(const MlpModel& model) {
  return [&model](double dh, double v0, double dt) {
    return predict_velocity(model, dh, v0, dt);
  };
}

VelocityFn oracle_velocity_fn(const TankNetworkConfig& cfg,
                              const FdmConfig& fdm) {
  return [cfg, fdm](double dh, double v0, double dt) {
    return momentum_ode_oracle(v0, dh, dt, cfg, fdm).back().v;
  };
}

SystemState p2f_step(const SystemState& state, double dt,
                     const VelocityFn& velocity,
                     const TankNetworkConfig& cfg) {
  const int m = cfg.n_paths();
  Eigen::VectorXd voids(m), v_next(m);
  for (int j = 1; j <= m; ++j) {
    const double alpha = void_fraction(state, j, cfg);
    const double dh = alpha == 1.0 ? 0.0 : driving_head(state, j);
    voids[j - 1] = alpha;
    v_next[j - 1] = velocity(dh, state.velocities[j - 1], dt);
  }
  SystemState next;
  next.levels = mass_step(state, v_next, voids, dt, cfg);
  next.velocities = v_next;
  next.time = state.time + dt;
  return next;
}

Trajectory p2f_simulate(const SystemState& initial, double dt, double t_end,
                        const VelocityFn& velocity,
                        const TankNetworkConfig& cfg, double max_dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("p2f_simulate: dt must be > 0");
  if (max_dt > 0.0 && dt > max_dt + 1e-12)
    throw std::invalid_argument(
        "p2f_simulate: time step exceeds the training window");

  const int n_steps = static_cast<int>(std::floor(t_end / dt + 1e-9));
  Trajectory traj;
  SystemState s = initial;
  traj.push(s);
  for (int step = 0; step < n_steps; ++step) {
    s = p2f_step(s, dt, velocity, cfg);
    traj.push(s);
  }
  return traj;
}

}  // namespace p2f
