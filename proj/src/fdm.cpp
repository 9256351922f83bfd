#include "p2f/fdm.hpp"

#include <cmath>

namespace p2f {

MomentumStepResult momentum_step_reference(double v_n, double dh, double dt,
                                           const TankNetworkConfig& cfg,
                                           const FdmConfig& fdm) {
  const double L = cfg.inertial_length;
  const double g = cfg.gravity;
  const double K = cfg.loss_coeff;

  MomentumStepResult res;
  double v_frozen = v_n;  // coefficient of the linearized friction term
  double v_next = v_n;
  res.converged = false;
  for (int k = 0; k < fdm.friction_iter_max; ++k) {
    const double v_prev = v_next;
    v_next = (L * v_n / dt + g * dh) / (L / dt + 0.5 * K * std::abs(v_frozen));
    // Averaging the frozen coefficient keeps the iteration contractive when
    // L/dt is tiny, where the plain substitution map oscillates around the
    // equilibrium velocity instead of settling on it.
    v_frozen = 0.5 * (v_frozen + v_next);
    res.iterations = k + 1;
    const double scale = std::max(std::abs(v_next), 1.0);
    if (std::abs(v_next - v_prev) <= fdm.friction_iter_tol * scale) {
      res.converged = true;
      break;
    }
  }
  res.v = std::max(v_next, 0.0);
  return res;
}

std::vector<OdeSample> momentum_ode_oracle(double v0, double dh, double T,
                                           const TankNetworkConfig& cfg,
                                           const FdmConfig& fdm) {
  const int n_outer = std::max(1, static_cast<int>(std::ceil(T / fdm.dt)));
  const long long n_sub =
      static_cast<long long>(fdm.substeps_per_dt) * n_outer;
  const double h = T / static_cast<double>(n_sub);

  std::vector<OdeSample> out;
  out.reserve(n_sub + 1);
  double v = v0;
  out.push_back({0.0, v});
  for (long long i = 0; i < n_sub; ++i) {
    v = momentum_step_reference(v, dh, h, cfg, fdm).v;
    out.push_back({(i + 1) * h, v});
  }
  return out;
}

Eigen::VectorXd mass_step(const SystemState& state,
                          const Eigen::VectorXd& v_new,
                          const Eigen::VectorXd& voids, double dt,
                          const TankNetworkConfig& cfg) {
  const int n = cfg.n_tanks;
  if (state.levels.size() != n || v_new.size() != n - 1 ||
      voids.size() != n - 1)
    throw std::invalid_argument("mass_step: inconsistent array sizes");
  if (!(dt > 0.0)) throw std::invalid_argument("mass_step: dt must be > 0");

  // Per-path transferred volume expressed as a level change (equal areas).
  const double flux_coeff = dt * cfg.fp_area() * cfg.open_fraction / cfg.tank_area;

  Eigen::VectorXd h = state.levels;
  double inflow = 0.0;  // limited transfer arriving from the upstream path
  for (int j = 0; j < n - 1; ++j) {
    double q = flux_coeff * v_new[j] * (1.0 - voids[j]);
    // Outflow limiting: the donor cannot give more than it holds.
    q = std::min(q, std::max(h[j] + inflow, 0.0));
    h[j] += inflow - q;
    inflow = q;
  }
  h[n - 1] += inflow;

  for (int i = 0; i < n; ++i)
    h[i] = std::clamp(h[i], 0.0, cfg.tank_height);
  return h;
}

Trajectory fdm_simulate(const SystemState& initial,
                        const TankNetworkConfig& cfg, const FdmConfig& fdm) {
  const int n_steps = static_cast<int>(std::floor(fdm.t_end / fdm.dt + 1e-9));
  const int m = cfg.n_paths();

  Trajectory traj;
  SystemState s = initial;
  traj.push(s);
  Eigen::VectorXd voids(m), v_next(m);
  for (int step = 0; step < n_steps; ++step) {
    for (int j = 1; j <= m; ++j) {
      const double alpha = void_fraction(s, j, cfg);
      // A dry upstream CV removes the driving head; friction decays the
      // velocity toward zero while the void gate nullifies its mass flux.
      const double dh = alpha == 1.0 ? 0.0 : driving_head(s, j);
      voids[j - 1] = alpha;
      v_next[j - 1] =
          momentum_step_reference(s.velocities[j - 1], dh, fdm.dt, cfg, fdm).v;
    }
    s.levels = mass_step(s, v_next, voids, fdm.dt, cfg);
    s.velocities = v_next;
    s.time += fdm.dt;
    traj.push(s);
  }
  return traj;
}

}  // namespace p2f
