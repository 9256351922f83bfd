#include "p2f/config.hpp"
#include "p2f/coupler.hpp"
#include "p2f/fdm.hpp"
#include "p2f/napinn.hpp"
#include "p2f/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDtTooLarge = 3;

p2f::AppConfig load_app_config(const std::string& explicit_path) {
  std::string path = explicit_path;
  if (path.empty()) {
    if (const char* env = std::getenv("P2F_CONFIG")) path = env;
  }
  if (path.empty()) return p2f::AppConfig{};  // built-in defaults
  return p2f::load_config(path);
}

// FNV-1a over the file bytes, for the run manifest.
std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Eigen::VectorXd parse_ic(const std::string& csv, int n_tanks) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  if (static_cast<int>(vals.size()) != n_tanks)
    throw std::runtime_error("initial condition needs exactly " +
                             std::to_string(n_tanks) + " levels, got " +
                             std::to_string(vals.size()));
  Eigen::VectorXd h(n_tanks);
  for (int i = 0; i < n_tanks; ++i) h[i] = vals[i];
  return h;
}

int cmd_train(const std::string& config_path, const std::string& out_path,
              long long seed_override) {
  p2f::AppConfig cfg = load_app_config(config_path);
  if (seed_override >= 0)
    cfg.train.seed = static_cast<unsigned long long>(seed_override);

  const auto train_set =
      p2f::sample_collocation(cfg.train.n_train, cfg.bounds, cfg.train.r_h0,
                              cfg.train.r_v0, cfg.train.seed);
  const auto val_set =
      p2f::sample_collocation(cfg.train.n_val, cfg.bounds, cfg.train.r_h0,
                              cfg.train.r_v0, cfg.train.seed + 1);

  std::cerr << "p2f: training " << cfg.train.n_epochs << " epochs on "
            << cfg.train.n_train << " collocation points (seed "
            << cfg.train.seed << ")\n";
  const auto result =
      p2f::train(train_set, val_set, cfg.train, cfg.tank, cfg.bounds);
  p2f::save_model(result.model, out_path);
  p2f::write_train_log_csv(result.log, out_path + ".log.csv");
  std::cerr << "p2f: best validation loss " << result.best_val_loss
            << ", model written to " << out_path << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& solver,
                 const std::string& ic_csv, double dt, double t_end,
                 const std::string& model_path, const std::string& out_path) {
  p2f::AppConfig cfg = load_app_config(config_path);
  cfg.fdm.dt = dt;
  cfg.fdm.t_end = t_end;
  cfg.fdm.validate();

  p2f::SystemState init = p2f::SystemState::zero(cfg.tank);
  init.levels = parse_ic(ic_csv, cfg.tank.n_tanks);

  p2f::Trajectory traj;
  std::string model_hash = "-";
  if (solver == "fdm") {
    traj = p2f::fdm_simulate(init, cfg.tank, cfg.fdm);
  } else if (solver == "p2f") {
    if (model_path.empty())
      throw std::runtime_error("--solver p2f requires --model");
    const p2f::MlpModel model = p2f::load_model(model_path);
    if (dt > model.bounds.time_window + 1e-12) {
      std::cerr << "p2f: error: time step exceeds training window ("
                << model.bounds.time_window << " s)\n";
      return kExitDtTooLarge;
    }
    model_hash = file_hash(model_path);
    traj = p2f::p2f_simulate(init, dt, t_end, p2f::pinn_velocity_fn(model),
                             cfg.tank, model.bounds.time_window);
  } else {
    throw std::runtime_error("unknown solver: " + solver);
  }

  p2f::write_trajectory_csv(traj, out_path);

  std::ofstream manifest(out_path + ".manifest.txt");
  manifest << "solver=" << solver << "\n"
           << "dt=" << dt << "\n"
           << "t_end=" << t_end << "\n"
           << "ic=" << ic_csv << "\n"
           << "model=" << (model_path.empty() ? "-" : model_path) << "\n"
           << "model_hash=" << model_hash << "\n"
           << "n_tanks=" << cfg.tank.n_tanks << "\n"
           << "loss_coeff=" << cfg.tank.loss_coeff << "\n"
           << "gravity=" << cfg.tank.gravity << "\n"
           << "tank_area=" << cfg.tank.tank_area << "\n"
           << "fp_diameter=" << cfg.tank.fp_diameter << "\n"
           << "inertial_length=" << cfg.tank.inertial_length << "\n";
  return 0;
}

int cmd_verify(const std::string& config_path, const std::string& model_path,
               const std::string& tables_csv, const std::string& out_dir) {
  p2f::AppConfig cfg = load_app_config(config_path);
  const p2f::MlpModel model = p2f::load_model(model_path);

  std::vector<int> tables;
  std::stringstream ss(tables_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) tables.push_back(std::stoi(tok));

  std::filesystem::create_directories(out_dir);
  const auto outcome = p2f::run_verification(model, cfg.tank, cfg.fdm, tables,
                                             p2f::VerifyBands{}, out_dir);
  for (const auto& line : outcome.lines) std::cout << line << "\n";
  if (!outcome.passed) {
    std::cout << outcome.failures.size() << " band(s) failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameterized PINN + FDM hybrid tank-cascade simulator"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "key=value config file (or P2F_CONFIG env var)");

  auto* train = app.add_subcommand("train", "train the momentum surrogate");
  std::string train_out = "model.txt";
  long long seed_override = -1;
  train->add_option("--out", train_out, "output model file");
  train->add_option("--seed", seed_override, "override the config seed");

  auto* sim = app.add_subcommand("simulate", "run a draining simulation");
  std::string solver = "fdm", ic = "2,0,0,0,0,0", model_path, sim_out = "trajectory.csv";
  double dt = 1.0, t_end = 400.0;
  sim->add_option("--solver", solver, "fdm or p2f")
      ->check(CLI::IsMember({"fdm", "p2f"}));
  sim->add_option("--ic", ic, "comma-separated initial levels");
  sim->add_option("--dt", dt, "time step (s)");
  sim->add_option("--t-end", t_end, "simulation horizon (s)");
  sim->add_option("--model", model_path, "trained model (p2f solver)");
  sim->add_option("--out", sim_out, "output trajectory CSV");

  auto* verify = app.add_subcommand("verify", "run the verification suites");
  std::string verify_model, tables = "1,2,3", verify_out = "verify_out";
  verify->add_option("--model", verify_model, "trained model")->required();
  verify->add_option("--tables", tables, "which suites to run, e.g. 1,2,3");
  verify->add_option("--out-dir", verify_out, "report output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(config_path, train_out, seed_override);
    if (sim->parsed())
      return cmd_simulate(config_path, solver, ic, dt, t_end, model_path,
                          sim_out);
    if (verify->parsed())
      return cmd_verify(config_path, verify_model, tables, verify_out);
  } catch (const std::exception& e) {
    std::cerr << "p2f: error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
