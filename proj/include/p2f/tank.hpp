#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace p2f {

// Geometry and physical constants of the gravity-draining tank cascade.
// All quantities SI. Defaults describe the six-tank staircase scenario.
struct TankNetworkConfig {
  int n_tanks = 6;
  double tank_area = 50.0;          // m^2, per control volume
  double tank_height = 2.0;         // m
  double fp_diameter = 0.2;         // m
  double inertial_length = 0.1;     // m, flow-path length L
  double elevation_drop = 1.8;      // m per stage, documentation only
  double open_fraction = 1.0;       // F, fraction of flow-path area open
  double loss_coeff = 1.0;          // K*, net form + wall loss
  double gravity = 9.81;            // m/s^2
  double density = 1000.0;          // kg/m^3
  double dry_threshold = 1e-9;      // m, level below which a CV is dry

  double fp_area() const {
    const double r = fp_diameter / 2.0;
    return M_PI * r * r;
  }

  int n_paths() const { return n_tanks - 1; }

  void validate() const;
};

// Normalization bounds of the trained input box (Δh, t, v0).
struct DomainBounds {
  double dh_train = 2.0;   // m
  double v0_max = 8.0;     // m/s
  double time_window = 1.0; // s, maximum time step the coupler accepts

  void validate() const;
};

// Water levels per CV and velocities per FP at one time instant.
struct SystemState {
  double time = 0.0;
  Eigen::VectorXd levels;      // size n_tanks, m
  Eigen::VectorXd velocities;  // size n_tanks-1, m/s

  static SystemState zero(const TankNetworkConfig& cfg) {
    SystemState s;
    s.levels = Eigen::VectorXd::Zero(cfg.n_tanks);
    s.velocities = Eigen::VectorXd::Zero(cfg.n_tanks - 1);
    return s;
  }
};

// Clamped water-level difference driving flow path j (1-based).
inline double driving_head(const SystemState& state, int j) {
  if (j < 1 || j >= static_cast<int>(state.levels.size()))
    throw std::out_of_range("driving_head: flow-path index " + std::to_string(j));
  return std::max(state.levels[j - 1] - state.levels[j], 0.0);
}

// Binary void fraction at flow path j: 1 when the upstream CV is dry.
inline double void_fraction(const SystemState& state, int j,
                            const TankNetworkConfig& cfg) {
  if (j < 1 || j >= static_cast<int>(state.levels.size()))
    throw std::out_of_range("void_fraction: flow-path index " + std::to_string(j));
  return state.levels[j - 1] <= cfg.dry_threshold ? 1.0 : 0.0;
}

}  // namespace p2f
