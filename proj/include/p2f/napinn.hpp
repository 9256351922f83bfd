#pragma once

#include "p2f/config.hpp"
#include "p2f/model.hpp"
#include "p2f/tank.hpp"

#include <string>
#include <vector>

namespace p2f {

// Fixed arrays of (Δh, t, v0) collocation points with boundary enrichment.
struct CollocationSet {
  Eigen::VectorXd dh;
  Eigen::VectorXd t;
  Eigen::VectorXd v0;

  int size() const { return static_cast<int>(dh.size()); }
};

// Deterministic boundary-enriched sampling: ceil(n*r_h0) points at dh=0,
// ceil(n*r_v0) points at v0=0, the rest uniform; t uniform in [0, T].
CollocationSet sample_collocation(int n, const DomainBounds& bounds,
                                  double r_h0, double r_v0,
                                  unsigned long long seed);

// Hard-IC output wrapper:  v̂ = v0 + t * NN(h̄, t̄, v̄0), so v̂(0) = v0
// exactly for any parameters. Returns v̂ and dv̂/dt (product rule).
struct HardIcOutput {
  double v;
  double dv_dt;
};
HardIcOutput hard_ic_velocity(const MlpModel& model, double dh, double t,
                              double v0);

// R = L * dv̂/dt - g*Δh + (K*/2) |v̂| v̂
inline double momentum_residual(double v_hat, double dv_dt, double dh,
                                const TankNetworkConfig& cfg) {
  return cfg.inertial_length * dv_dt - cfg.gravity * dh +
         0.5 * cfg.loss_coeff * std::abs(v_hat) * v_hat;
}

// Mean squared momentum residual over the batch and its exact gradient with
// respect to every weight and bias (reverse mode over the forward-mode
// augmented pass; the residual contains ∂v̂/∂t, so parameter gradients are
// mixed second derivatives).
struct LossGrad {
  double loss;
  Eigen::VectorXd grad;
};
LossGrad loss_and_gradient(const MlpModel& model, const CollocationSet& batch,
                           const TankNetworkConfig& physics);

// Loss only (validation path).
double batch_loss(const MlpModel& model, const CollocationSet& batch,
                  const TankNetworkConfig& physics);

struct TrainLogEntry {
  int epoch;
  double train_loss;
  double val_loss;  // NaN on epochs without a validation pass
  double lr;
};

struct TrainResult {
  MlpModel model;  // best-validation snapshot
  std::vector<TrainLogEntry> log;
  double best_val_loss;
};

// Full-batch Adam with gradient clipping, piecewise LR schedule and
// best-validation model restore.
TrainResult train(const CollocationSet& train_set,
                  const CollocationSet& val_set, const TrainConfig& cfg,
                  const TankNetworkConfig& physics, const DomainBounds& bounds);

// Inference entry: out-of-range inputs are clamped to the training box
// (warning on stderr, once per process); result clamped at >= 0.
double predict_velocity(const MlpModel& model, double dh, double v0, double t);

void write_train_log_csv(const std::vector<TrainLogEntry>& log,
                         const std::string& path);

}  // namespace p2f
