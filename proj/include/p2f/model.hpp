#pragma once

#include "p2f/tank.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <vector>

namespace p2f {

// Scalar carrying its derivative with respect to un-normalized time.
struct DualScalar {
  double value = 0.0;
  double d_dt = 0.0;

  DualScalar() = default;
  DualScalar(double v, double d) : value(v), d_dt(d) {}
  static DualScalar constant(double v) { return {v, 0.0}; }
};

inline DualScalar operator+(DualScalar a, DualScalar b) {
  return {a.value + b.value, a.d_dt + b.d_dt};
}
inline DualScalar operator-(DualScalar a, DualScalar b) {
  return {a.value - b.value, a.d_dt - b.d_dt};
}
inline DualScalar operator*(DualScalar a, DualScalar b) {
  return {a.value * b.value, a.d_dt * b.value + a.value * b.d_dt};
}
inline DualScalar operator*(double c, DualScalar a) {
  return {c * a.value, c * a.d_dt};
}
inline DualScalar tanh(DualScalar a) {
  const double t = std::tanh(a.value);
  return {t, (1.0 - t * t) * a.d_dt};
}

// Fully-connected network, tanh hidden layers, identity output, plus the
// normalization bounds that make a saved model self-contained.
// Input width is fixed at 3 (normalized Δh, t, v0), output width at 1.
struct MlpModel {
  std::vector<int> layer_sizes;
  std::vector<Eigen::MatrixXd> weights;  // weights[k]: layer_sizes[k+1] x layer_sizes[k]
  std::vector<Eigen::VectorXd> biases;   // biases[k]: layer_sizes[k+1]
  DomainBounds bounds;

  int n_layers() const { return static_cast<int>(weights.size()); }
  int n_params() const;

  // Shapes checked at construction, never at call time.
  static MlpModel zeros(const std::vector<int>& layer_sizes,
                        const DomainBounds& bounds);

  // Per-layer uniform init in [-sqrt(6/(fan_in+fan_out)), +...], zero biases.
  static MlpModel random_init(const std::vector<int>& layer_sizes,
                              const DomainBounds& bounds,
                              unsigned long long seed);

  // Flat parameter vector, fixed layer-major layout: for each layer the
  // weight matrix in column-major order, then the bias.
  Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::VectorXd& theta);
};

// Dense forward pass on already-normalized inputs.
double forward(const MlpModel& model, const Eigen::Vector3d& inputs);

// Network output and its exact derivative with respect to physical time t.
// dh_bar and v0_bar are already normalized; t is physical and normalized
// internally (inner derivative 1/T).
struct DualOutput {
  double value;
  double dvalue_dt;
};
DualOutput forward_dual(const MlpModel& model, double dh_bar, double t,
                        double v0_bar);

// Text model file: line 1 `layer_sizes: a,b,...`, line 2
// `bounds: dh_train,v0_max,T`, then one parameter per line in flat layout.
// Round-trips bit-exactly.
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

}  // namespace p2f
