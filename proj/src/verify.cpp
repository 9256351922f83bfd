#include "p2f/verify.hpp"

#include "p2f/fdm.hpp"
#include "p2f/napinn.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace p2f {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

ErrorReport compare_trajectories(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("compare_trajectories: length mismatch");
  for (size_t k = 0; k < a.size(); ++k)
    if (std::abs(a.times[k] - b.times[k]) > 1e-9)
      throw std::invalid_argument("compare_trajectories: time grid mismatch");

  ErrorReport r;
  double h_abs = 0.0, h_sq = 0.0, v_abs = 0.0, v_sq = 0.0;
  long long nh = 0, nv = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    const Eigen::VectorXd dh = a.states[k].levels - b.states[k].levels;
    const Eigen::VectorXd dv = a.states[k].velocities - b.states[k].velocities;
    h_abs += dh.cwiseAbs().sum();
    h_sq += dh.squaredNorm();
    v_abs += dv.cwiseAbs().sum();
    v_sq += dv.squaredNorm();
    nh += dh.size();
    nv += dv.size();
  }
  r.level_mae = h_abs / nh;
  r.level_mse = h_sq / nh;
  r.velocity_mae = v_abs / nv;
  r.velocity_mse = v_sq / nv;
  return r;
}

SystemState nominal_initial_state(const TankNetworkConfig& cfg) {
  SystemState s = SystemState::zero(cfg);
  s.levels[0] = cfg.tank_height;
  return s;
}

std::vector<Scenario> scenario_catalog(const TankNetworkConfig& cfg) {
  if (cfg.n_tanks != 6)
    throw std::invalid_argument("scenario catalog is defined for six tanks");
  auto mk = [](const std::string& name,
               std::initializer_list<double> h) {
    Scenario s;
    s.name = name;
    s.levels = Eigen::VectorXd(static_cast<Eigen::Index>(h.size()));
    Eigen::Index i = 0;
    for (double v : h) s.levels[i++] = v;
    return s;
  };
  return {
      mk("case1", {1.5, 0.5, 0.0, 0.0, 0.0, 0.0}),
      mk("case2", {1.0, 0.5, 0.5, 0.0, 0.0, 0.0}),
      mk("case3", {1.3, 0.7, 0.0, 0.0, 0.0, 0.0}),
      mk("case4", {0.5, 0.5, 0.5, 0.5, 0.0, 0.0}),
      mk("case5", {1.0, 0.5, 0.3, 0.2, 0.0, 0.0}),
  };
}

StandaloneError standalone_error(const MlpModel& model, double dh, double v0,
                                 const TankNetworkConfig& cfg,
                                 const FdmConfig& fdm) {
  const auto curve =
      momentum_ode_oracle(v0, dh, model.bounds.time_window, cfg, fdm);
  double abs_sum = 0.0, sq_sum = 0.0;
  for (const auto& s : curve) {
    const double v_pinn = hard_ic_velocity(model, dh, s.t, v0).v;
    const double e = v_pinn - s.v;
    abs_sum += std::abs(e);
    sq_sum += e * e;
  }
  StandaloneError out;
  out.dh = dh;
  out.v0 = v0;
  out.mae = abs_sum / curve.size();
  out.mse = sq_sum / curve.size();
  return out;
}

std::vector<StandaloneError> run_table1(const MlpModel& model,
                                        const TankNetworkConfig& cfg,
                                        const FdmConfig& fdm) {
  return {standalone_error(model, 1.0, 0.0, cfg, fdm),
          standalone_error(model, 2.0, 3.0, cfg, fdm),
          standalone_error(model, 1.0, 6.0, cfg, fdm)};
}

std::vector<ErrorReport> run_table2(const MlpModel& model,
                                    const TankNetworkConfig& cfg,
                                    FdmConfig fdm) {
  const SystemState init = nominal_initial_state(cfg);
  std::vector<ErrorReport> out;
  for (double dt : {0.2, 0.5, 1.0}) {
    fdm.dt = dt;

    auto t0 = std::chrono::steady_clock::now();
    const Trajectory ref = fdm_simulate(init, cfg, fdm);
    const double ref_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const Trajectory hyb =
        p2f_simulate(init, dt, fdm.t_end, pinn_velocity_fn(model), cfg,
                     model.bounds.time_window);
    const double hyb_s = seconds_since(t0);

    ErrorReport r = compare_trajectories(hyb, ref);
    r.scenario = "nominal";
    r.dt = dt;
    r.reference_seconds = ref_s;
    r.hybrid_seconds = hyb_s;
    out.push_back(r);
  }
  return out;
}

std::vector<ErrorReport> run_table3(const MlpModel& model,
                                    const TankNetworkConfig& cfg,
                                    FdmConfig fdm) {
  fdm.dt = 1.0;
  std::vector<ErrorReport> out;
  for (const auto& sc : scenario_catalog(cfg)) {
    SystemState init = SystemState::zero(cfg);
    init.levels = sc.levels;
    const Trajectory ref = fdm_simulate(init, cfg, fdm);
    const Trajectory hyb =
        p2f_simulate(init, fdm.dt, fdm.t_end, pinn_velocity_fn(model), cfg,
                     model.bounds.time_window);
    ErrorReport r = compare_trajectories(hyb, ref);
    r.scenario = sc.name;
    r.dt = fdm.dt;
    out.push_back(r);
  }
  return out;
}

VerifyOutcome run_verification(const MlpModel& model,
                               const TankNetworkConfig& cfg,
                               const FdmConfig& fdm,
                               const std::vector<int>& tables,
                               const VerifyBands& bands,
                               const std::string& out_dir) {
  VerifyOutcome outcome;
  auto has = [&](int t) {
    return std::find(tables.begin(), tables.end(), t) != tables.end();
  };
  auto check = [&](bool ok, const std::string& what) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "[%s] %s", ok ? "PASS" : "FAIL",
                  what.c_str());
    outcome.lines.emplace_back(buf);
    if (!ok) {
      outcome.passed = false;
      outcome.failures.push_back(what);
    }
  };
  auto fmt = [](const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return std::string(buf);
  };

  std::ofstream md(out_dir + "/report.md");
  if (!md) throw std::runtime_error("cannot write report in " + out_dir);
  md << "# Verification report\n\n";

  if (has(1)) {
    const auto rows = run_table1(model, cfg, fdm);
    std::ofstream csv(out_dir + "/table1.csv");
    csv << "dh,v0,mae,mse\n";
    md << "## Standalone momentum surrogate\n\n"
       << "| (dh, v0) | MAE (m/s) | MSE |\n|---|---|---|\n";
    for (const auto& r : rows) {
      csv << fmt("%g,%g,%.17g,%.17g\n", r.dh, r.v0, r.mae, r.mse);
      md << fmt("| (%.1f, %.1f) | %.3e | %.3e |\n", r.dh, r.v0, r.mae, r.mse);
      const double band =
          r.v0 >= 6.0 ? bands.table1_mae_high_v0 : bands.table1_mae_default;
      check(r.mae <= band, fmt("standalone (dh=%.1f, v0=%.1f) MAE %.3e <= %.1e",
                               r.dh, r.v0, r.mae, band));
    }
    md << "\n";
  }

  if (has(2)) {
    const auto rows = run_table2(model, cfg, fdm);
    std::ofstream csv(out_dir + "/table2.csv");
    csv << "dt,level_mae,level_mse,velocity_mae,velocity_mse,"
           "fdm_seconds,p2f_seconds,speedup\n";
    md << "## Nominal initial condition, time-step sweep\n\n"
       << "| dt (s) | level MAE (m) | level MSE | velocity MAE (m/s) | "
          "velocity MSE | FDM (s) | P2F (s) | speedup |\n"
       << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
      const double speedup = r.reference_seconds / r.hybrid_seconds;
      csv << fmt("%g,%.17g,%.17g,%.17g,%.17g,%.6f,%.6f,%.4f\n", r.dt,
                 r.level_mae, r.level_mse, r.velocity_mae, r.velocity_mse,
                 r.reference_seconds, r.hybrid_seconds, speedup);
      md << fmt("| %.1f | %.3e | %.3e | %.3e | %.3e | %.4f | %.4f | %.3fx |\n",
                r.dt, r.level_mae, r.level_mse, r.velocity_mae, r.velocity_mse,
                r.reference_seconds, r.hybrid_seconds, speedup);
      check(r.level_mae <= bands.table2_level_mae,
            fmt("nominal dt=%.1f level MAE %.3e <= %.1e", r.dt, r.level_mae,
                bands.table2_level_mae));
      check(r.velocity_mae <= bands.table2_velocity_mae,
            fmt("nominal dt=%.1f velocity MAE %.3e <= %.1e", r.dt,
                r.velocity_mae, bands.table2_velocity_mae));
      check(std::isfinite(speedup) && speedup > 0.0,
            fmt("nominal dt=%.1f speedup ratio finite and positive (%.3fx)",
                r.dt, speedup));
    }
    md << "\n";
  }

  if (has(3)) {
    const auto rows = run_table3(model, cfg, fdm);
    std::ofstream csv(out_dir + "/table3.csv");
    csv << "case,level_mae,level_mse,velocity_mae,velocity_mse\n";
    md << "## Generalization across initial conditions (dt = 1.0 s)\n\n"
       << "| case | level MAE (m) | level MSE | velocity MAE (m/s) | velocity "
          "MSE |\n|---|---|---|---|---|\n";
    double mae_min = std::numeric_limits<double>::infinity(), mae_max = 0.0;
    for (const auto& r : rows) {
      csv << fmt("%s,%.17g,%.17g,%.17g,%.17g\n", r.scenario.c_str(),
                 r.level_mae, r.level_mse, r.velocity_mae, r.velocity_mse);
      md << fmt("| %s | %.3e | %.3e | %.3e | %.3e |\n", r.scenario.c_str(),
                r.level_mae, r.level_mse, r.velocity_mae, r.velocity_mse);
      check(r.level_mae <= bands.table3_level_mae,
            fmt("%s level MAE %.3e <= %.1e", r.scenario.c_str(), r.level_mae,
                bands.table3_level_mae));
      check(r.velocity_mae <= bands.table3_velocity_mae,
            fmt("%s velocity MAE %.3e <= %.1e", r.scenario.c_str(),
                r.velocity_mae, bands.table3_velocity_mae));
      mae_min = std::min(mae_min, r.level_mae);
      mae_max = std::max(mae_max, r.level_mae);
    }
    check(mae_max <= bands.table3_level_ratio * mae_min,
          fmt("level MAE max/min ratio %.2f <= %.1f", mae_max / mae_min,
              bands.table3_level_ratio));
    md << "\n";
  }

  md << "## Result\n\n"
     << (outcome.passed ? "All pass bands met.\n"
                        : "Some pass bands NOT met:\n");
  for (const auto& f : outcome.failures) md << "- " << f << "\n";
  return outcome;
}

}  // namespace p2f
