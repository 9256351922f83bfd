#include "p2f/napinn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <random>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace p2f {

CollocationSet sample_collocation(int n, const DomainBounds& bounds,
                                  double r_h0, double r_v0,
                                  unsigned long long seed) {
  if (n < 1) throw std::invalid_argument("sample_collocation: n must be >= 1");
  if (r_h0 < 0.0 || r_h0 >= 1.0 || r_v0 < 0.0 || r_v0 >= 1.0)
    throw std::invalid_argument("sample_collocation: ratios must be in [0, 1)");
  bounds.validate();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int n_h0 = static_cast<int>(std::ceil(n * r_h0));
  const int n_v0 = static_cast<int>(std::ceil(n * r_v0));

  CollocationSet set;
  set.dh.resize(n);
  set.t.resize(n);
  set.v0.resize(n);
  for (int i = 0; i < n; ++i) {
    set.dh[i] = unit(rng) * bounds.dh_train;
    set.t[i] = unit(rng) * bounds.time_window;
    set.v0[i] = unit(rng) * bounds.v0_max;
  }
  // Zero out independently drawn index subsets. Independence matters: it
  // makes the two enrichments overlap on ~r_h0*r_v0 of the batch, anchoring
  // the quiescent corner (dh=0, v0=0) where the exact solution is v=0 and
  // which coupled runs with equal tank levels query every step.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (int i = 0; i < n_h0; ++i) set.dh[idx[i]] = 0.0;
  std::shuffle(idx.begin(), idx.end(), rng);
  for (int i = 0; i < n_v0; ++i) set.v0[idx[i]] = 0.0;
  return set;
}

HardIcOutput hard_ic_velocity(const MlpModel& model, double dh, double t,
                              double v0) {
  const auto& b = model.bounds;
  const DualOutput nn =
      forward_dual(model, dh / b.dh_train, t, v0 / b.v0_max);
  return {v0 + t * nn.value, nn.value + t * nn.dvalue_dt};
}

namespace {

// Batched forward/tangent pass. Columns are collocation points; each layer
// carries the value track X and the d/dt tangent track U.
struct BatchForward {
  std::vector<Eigen::MatrixXd> x;  // x[k]: activations, x[0] = inputs
  std::vector<Eigen::MatrixXd> u;  // u[k]: tangents
  Eigen::ArrayXd nn;      // network output N (row 0 of x.back())
  Eigen::ArrayXd nn_dot;  // dN/dt
  Eigen::ArrayXd v_hat;   // v0 + t*N
  Eigen::ArrayXd dv_dt;   // N + t*dN/dt
  Eigen::ArrayXd residual;
};

BatchForward batch_forward(const MlpModel& model, const CollocationSet& batch,
                           const TankNetworkConfig& physics) {
  const int n = batch.size();
  const int L = model.n_layers();
  const auto& b = model.bounds;

  BatchForward f;
  f.x.resize(L + 1);
  f.u.resize(L + 1);
  f.x[0].resize(3, n);
  f.x[0].row(0) = (batch.dh / b.dh_train).transpose();
  f.x[0].row(1) = (batch.t / b.time_window).transpose();
  f.x[0].row(2) = (batch.v0 / b.v0_max).transpose();
  f.u[0] = Eigen::MatrixXd::Zero(3, n);
  f.u[0].row(1).setConstant(1.0 / b.time_window);

  for (int k = 0; k < L; ++k) {
    f.x[k + 1].noalias() = model.weights[k] * f.x[k];
    f.x[k + 1].colwise() += model.biases[k];
    f.u[k + 1].noalias() = model.weights[k] * f.u[k];
    if (k + 1 < L) {
      // tanh via the vectorized exp kernel: Eigen only vectorizes tanh for
      // floats, and the scalar libm fallback dominates the epoch cost. The
      // exp form is exact in the saturated limits and within a few ulp of
      // std::tanh elsewhere.
      f.x[k + 1] =
          (1.0 - 2.0 / ((2.0 * f.x[k + 1].array()).exp() + 1.0)).matrix();
      f.u[k + 1].array() *= 1.0 - f.x[k + 1].array().square();
    }
  }

  f.nn = f.x[L].row(0).transpose().array();
  f.nn_dot = f.u[L].row(0).transpose().array();
  const Eigen::ArrayXd t = batch.t.array();
  f.v_hat = batch.v0.array() + t * f.nn;
  f.dv_dt = f.nn + t * f.nn_dot;
  f.residual = physics.inertial_length * f.dv_dt -
               physics.gravity * batch.dh.array() +
               0.5 * physics.loss_coeff * f.v_hat.abs() * f.v_hat;
  return f;
}

}  // namespace

double batch_loss(const MlpModel& model, const CollocationSet& batch,
                  const TankNetworkConfig& physics) {
  if (batch.size() == 0) throw std::invalid_argument("batch_loss: empty batch");
  const BatchForward f = batch_forward(model, batch, physics);
  return f.residual.square().mean();
}

LossGrad loss_and_gradient(const MlpModel& model, const CollocationSet& batch,
                           const TankNetworkConfig& physics) {
  const int n = batch.size();
  if (n == 0) throw std::invalid_argument("loss_and_gradient: empty batch");
  const int L = model.n_layers();

  const BatchForward f = batch_forward(model, batch, physics);
  const double loss = f.residual.square().mean();
  if (!std::isfinite(loss)) {
    Eigen::Index bad = 0;
    for (Eigen::Index i = 0; i < f.residual.size(); ++i)
      if (!std::isfinite(f.residual[i])) {
        bad = i;
        break;
      }
    throw std::runtime_error(
        "loss_and_gradient: non-finite residual at collocation index " +
        std::to_string(bad));
  }

  // Reverse sweep over the forward-mode augmented graph. Per point:
  //   dR/dN    = L + K |v̂| t        (N enters both dv̂/dt and v̂)
  //   dR/dNdot = L t
  const Eigen::ArrayXd t = batch.t.array();
  const Eigen::ArrayXd dloss_dr = (2.0 / n) * f.residual;
  Eigen::MatrixXd xbar(1, n), ubar(1, n);
  xbar.row(0) =
      (dloss_dr * (physics.inertial_length +
                   physics.loss_coeff * f.v_hat.abs() * t))
          .transpose();
  ubar.row(0) = (dloss_dr * physics.inertial_length * t).transpose();

  std::vector<Eigen::MatrixXd> wgrad(L);
  std::vector<Eigen::VectorXd> bgrad(L);
  Eigen::MatrixXd sbar, pbar;
  for (int k = L - 1; k >= 0; --k) {
    if (k == L - 1) {  // identity output layer
      sbar = xbar;
      pbar = ubar;
    } else {
      const auto phi = (1.0 - f.x[k + 1].array().square());  // tanh'
      // u[k+1] = phi ⊙ p, and phi itself depends on the pre-activation:
      // d(phi)/ds = -2 x phi, routed through p = u[k+1]/phi.
      pbar = (phi * ubar.array()).matrix();
      sbar = (phi * xbar.array() -
              2.0 * f.x[k + 1].array() * f.u[k + 1].array() * ubar.array())
                 .matrix();
    }
    wgrad[k].noalias() = sbar * f.x[k].transpose();
    wgrad[k].noalias() += pbar * f.u[k].transpose();
    bgrad[k] = sbar.rowwise().sum();
    if (k > 0) {
      xbar.noalias() = model.weights[k].transpose() * sbar;
      ubar.noalias() = model.weights[k].transpose() * pbar;
    }
  }

  LossGrad out;
  out.loss = loss;
  out.grad.resize(model.n_params());
  Eigen::Index off = 0;
  for (int k = 0; k < L; ++k) {
    out.grad.segment(off, wgrad[k].size()) =
        Eigen::Map<const Eigen::VectorXd>(wgrad[k].data(), wgrad[k].size());
    off += wgrad[k].size();
    out.grad.segment(off, bgrad[k].size()) = bgrad[k];
    off += bgrad[k].size();
  }
  return out;
}

TrainResult train(const CollocationSet& train_set,
                  const CollocationSet& val_set, const TrainConfig& cfg,
                  const TankNetworkConfig& physics,
                  const DomainBounds& bounds) {
  cfg.validate();
  if (train_set.size() == 0 || val_set.size() == 0)
    throw std::invalid_argument("train: empty collocation set");

#if defined(__GLIBC__)
  // The per-epoch batch temporaries are several MB each, above glibc's
  // default mmap threshold; without this the training loop spends more time
  // in mmap/munmap than in linear algebra.
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif

  MlpModel model = MlpModel::random_init(cfg.layer_sizes, bounds, cfg.seed);
  Eigen::VectorXd theta = model.flatten();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());

  TrainResult result;
  result.best_val_loss = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_theta = theta;

  for (int epoch = 1; epoch <= cfg.n_epochs; ++epoch) {
    const double lr = cfg.lr_at(epoch);

    LossGrad lg;
    try {
      lg = loss_and_gradient(model, train_set, physics);
    } catch (const std::runtime_error&) {
      break;  // non-finite loss: keep the last good snapshot
    }
    if (!std::isfinite(lg.loss)) break;

    const double gnorm = lg.grad.norm();
    if (gnorm > cfg.clip_norm) lg.grad *= cfg.clip_norm / gnorm;

    m = cfg.beta1 * m + (1.0 - cfg.beta1) * lg.grad;
    v = cfg.beta2 * v +
        (1.0 - cfg.beta2) * lg.grad.cwiseProduct(lg.grad);
    const double bc1 = 1.0 - std::pow(cfg.beta1, epoch);
    const double bc2 = 1.0 - std::pow(cfg.beta2, epoch);
    theta.array() -= lr * (m.array() / bc1) /
                     ((v.array() / bc2).sqrt() + cfg.adam_eps);
    model.unflatten(theta);

    TrainLogEntry entry{epoch, lg.loss,
                        std::numeric_limits<double>::quiet_NaN(), lr};
    if (epoch % cfg.val_every == 0 || epoch == cfg.n_epochs) {
      entry.val_loss = batch_loss(model, val_set, physics);
      if (entry.val_loss < result.best_val_loss) {
        result.best_val_loss = entry.val_loss;
        best_theta = theta;
      }
    }
    result.log.push_back(entry);
  }

  model.unflatten(best_theta);
  result.model = std::move(model);
  return result;
}

double predict_velocity(const MlpModel& model, double dh, double v0,
                        double t) {
  const auto& b = model.bounds;
  static bool warned = false;
  const bool out_of_range = dh < 0.0 || dh > b.dh_train || v0 < 0.0 ||
                            v0 > b.v0_max || t < 0.0 || t > b.time_window;
  if (out_of_range && !warned) {
    warned = true;
    std::cerr << "p2f: warning: inference input outside training box "
              << "(dh=" << dh << ", v0=" << v0 << ", t=" << t
              << "), clamping\n";
  }
  dh = std::clamp(dh, 0.0, b.dh_train);
  v0 = std::clamp(v0, 0.0, b.v0_max);
  t = std::clamp(t, 0.0, b.time_window);
  return std::max(hard_ic_velocity(model, dh, t, v0).v, 0.0);
}

void write_train_log_csv(const std::vector<TrainLogEntry>& log,
                         const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "epoch,train_loss,val_loss,lr\n");
  for (const auto& e : log) {
    std::fprintf(f, "%d,%.17g,", e.epoch, e.train_loss);
    if (std::isfinite(e.val_loss)) std::fprintf(f, "%.17g", e.val_loss);
    std::fprintf(f, ",%.17g\n", e.lr);
  }
  std::fclose(f);
}

}  // namespace p2f
