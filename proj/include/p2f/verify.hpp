#pragma once

#include "p2f/config.hpp"
#include "p2f/coupler.hpp"
#include "p2f/model.hpp"
#include "p2f/trajectory.hpp"

#include <string>
#include <vector>

namespace p2f {

// Pooled error statistics between two trajectories on the same grid.
struct ErrorReport {
  std::string scenario;
  double dt = 0.0;
  double level_mae = 0.0;
  double level_mse = 0.0;
  double velocity_mae = 0.0;
  double velocity_mse = 0.0;
  double reference_seconds = 0.0;
  double hybrid_seconds = 0.0;
};

ErrorReport compare_trajectories(const Trajectory& a, const Trajectory& b);

// Nominal IC plus the five generalization cases, initial velocities zero.
struct Scenario {
  std::string name;
  Eigen::VectorXd levels;
};
std::vector<Scenario> scenario_catalog(const TankNetworkConfig& cfg);
SystemState nominal_initial_state(const TankNetworkConfig& cfg);

// Standalone momentum comparison: PINN vs the sub-stepped ODE oracle over
// [0, T] for one (dh, v0) condition.
struct StandaloneError {
  double dh;
  double v0;
  double mae;
  double mse;
};
StandaloneError standalone_error(const MlpModel& model, double dh, double v0,
                                 const TankNetworkConfig& cfg,
                                 const FdmConfig& fdm);

// Verification suites mirroring the error and timing tables.
std::vector<StandaloneError> run_table1(const MlpModel& model,
                                        const TankNetworkConfig& cfg,
                                        const FdmConfig& fdm);

std::vector<ErrorReport> run_table2(const MlpModel& model,
                                    const TankNetworkConfig& cfg,
                                    FdmConfig fdm);

std::vector<ErrorReport> run_table3(const MlpModel& model,
                                    const TankNetworkConfig& cfg,
                                    FdmConfig fdm);

// Pass bands for the verification suites.
struct VerifyBands {
  double table1_mae_default = 1.5e-2;   // (1.0,0) and (2.0,3.0)
  double table1_mae_high_v0 = 1.0e-2;   // (1.0,6.0)
  double table2_level_mae = 5e-4;
  double table2_velocity_mae = 1.5e-2;
  double table3_level_mae = 5e-4;
  double table3_velocity_mae = 2e-2;
  double table3_level_ratio = 10.0;
};

struct VerifyOutcome {
  bool passed = true;
  std::vector<std::string> failures;
  std::vector<std::string> lines;  // human-readable report lines
};

VerifyOutcome run_verification(const MlpModel& model,
                               const TankNetworkConfig& cfg,
                               const FdmConfig& fdm,
                               const std::vector<int>& tables,
                               const VerifyBands& bands,
                               const std::string& out_dir);

}  // namespace p2f
