#pragma once

#include "p2f/tank.hpp"

#include <map>
#include <string>
#include <vector>

namespace p2f {

struct FdmConfig {
  double dt = 1.0;              // s
  double t_end = 400.0;         // s
  double friction_iter_tol = 1e-10;
  int friction_iter_max = 50;
  int substeps_per_dt = 100;    // high-resolution oracle mode

  void validate() const;
};

struct TrainConfig {
  int n_epochs = 20000;
  // (first epoch of validity, learning rate); milestones strictly increasing,
  // first entry at epoch 1.
  std::vector<std::pair<int, double>> lr_schedule = {
      {1, 1e-3}, {8000, 1e-4}, {16000, 1e-5}};
  double clip_norm = 1.0;
  int val_every = 100;
  unsigned long long seed = 42;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int n_train = 4096;
  int n_val = 1024;
  double r_h0 = 0.1;
  double r_v0 = 0.1;
  std::vector<int> layer_sizes = {3, 48, 48, 48, 1};

  double lr_at(int epoch) const;
  void validate() const;
};

// Everything the CLI configures, loadable from a flat key=value file.
struct AppConfig {
  TankNetworkConfig tank;
  DomainBounds bounds;
  FdmConfig fdm;
  TrainConfig train;
};

// Parses `key=value` lines; `#` starts a comment, blank lines skipped.
// Unknown keys are an error (catches typos early).
AppConfig load_config(const std::string& path);
AppConfig parse_config(const std::map<std::string, std::string>& kv);

}  // namespace p2f
