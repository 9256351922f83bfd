#include "p2f/model.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace p2f {

namespace {

void check_layer_sizes(const std::vector<int>& ls) {
  if (ls.size() < 2)
    throw std::invalid_argument("layer_sizes needs at least input and output");
  if (ls.front() != 3)
    throw std::invalid_argument("input width must be 3 (normalized dh, t, v0)");
  if (ls.back() != 1) throw std::invalid_argument("output width must be 1");
  for (int w : ls)
    if (w < 1) throw std::invalid_argument("layer widths must be positive");
}

}  // namespace

int MlpModel::n_params() const {
  int n = 0;
  for (int k = 0; k < n_layers(); ++k)
    n += static_cast<int>(weights[k].size() + biases[k].size());
  return n;
}

MlpModel MlpModel::zeros(const std::vector<int>& layer_sizes,
                         const DomainBounds& bounds) {
  check_layer_sizes(layer_sizes);
  bounds.validate();
  MlpModel m;
  m.layer_sizes = layer_sizes;
  m.bounds = bounds;
  for (size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
    m.weights.emplace_back(
        Eigen::MatrixXd::Zero(layer_sizes[k + 1], layer_sizes[k]));
    m.biases.emplace_back(Eigen::VectorXd::Zero(layer_sizes[k + 1]));
  }
  return m;
}

MlpModel MlpModel::random_init(const std::vector<int>& layer_sizes,
                               const DomainBounds& bounds,
                               unsigned long long seed) {
  MlpModel m = zeros(layer_sizes, bounds);
  std::mt19937_64 rng(seed);
  for (int k = 0; k < m.n_layers(); ++k) {
    const double fan_in = layer_sizes[k];
    const double fan_out = layer_sizes[k + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < m.weights[k].size(); ++i)
      m.weights[k].data()[i] = dist(rng);
  }
  return m;
}

Eigen::VectorXd MlpModel::flatten() const {
  Eigen::VectorXd theta(n_params());
  Eigen::Index off = 0;
  for (int k = 0; k < n_layers(); ++k) {
    theta.segment(off, weights[k].size()) =
        Eigen::Map<const Eigen::VectorXd>(weights[k].data(), weights[k].size());
    off += weights[k].size();
    theta.segment(off, biases[k].size()) = biases[k];
    off += biases[k].size();
  }
  return theta;
}

void MlpModel::unflatten(const Eigen::VectorXd& theta) {
  if (theta.size() != n_params())
    throw std::invalid_argument("unflatten: parameter vector length mismatch");
  Eigen::Index off = 0;
  for (int k = 0; k < n_layers(); ++k) {
    Eigen::Map<Eigen::VectorXd>(weights[k].data(), weights[k].size()) =
        theta.segment(off, weights[k].size());
    off += weights[k].size();
    biases[k] = theta.segment(off, biases[k].size());
    off += biases[k].size();
  }
}

namespace {

// Shared evaluation core: forward() runs it with a zero tangent so its value
// goes through the exact same instruction sequence as forward_dual(), which
// keeps the two bit-identical regardless of how the optimizer contracts
// floating-point expressions in separately written loops.
DualScalar evaluate_dual(const MlpModel& model, std::vector<DualScalar> x) {
  const int L = model.n_layers();
  for (int k = 0; k < L; ++k) {
    const auto& W = model.weights[k];
    const auto& b = model.biases[k];
    std::vector<DualScalar> y(W.rows());
    for (Eigen::Index r = 0; r < W.rows(); ++r) {
      DualScalar acc = DualScalar::constant(b[r]);
      for (Eigen::Index c = 0; c < W.cols(); ++c) acc = acc + W(r, c) * x[c];
      y[r] = k + 1 < L ? tanh(acc) : acc;
    }
    x = std::move(y);
  }
  return x[0];
}

}  // namespace

double forward(const MlpModel& model, const Eigen::Vector3d& inputs) {
  return evaluate_dual(model, {DualScalar::constant(inputs[0]),
                               DualScalar::constant(inputs[1]),
                               DualScalar::constant(inputs[2])})
      .value;
}

DualOutput forward_dual(const MlpModel& model, double dh_bar, double t,
                        double v0_bar) {
  const double T = model.bounds.time_window;
  const DualScalar out = evaluate_dual(model, {DualScalar::constant(dh_bar),
                                               {t / T, 1.0 / T},
                                               DualScalar::constant(v0_bar)});
  return {out.value, out.d_dt};
}

void save_model(const MlpModel& model, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "layer_sizes: ");
  for (size_t i = 0; i < model.layer_sizes.size(); ++i)
    std::fprintf(f, "%s%d", i ? "," : "", model.layer_sizes[i]);
  std::fprintf(f, "\nbounds: %.17g,%.17g,%.17g\n", model.bounds.dh_train,
               model.bounds.v0_max, model.bounds.time_window);
  const Eigen::VectorXd theta = model.flatten();
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    std::fprintf(f, "%.17g\n", theta[i]);
  std::fclose(f);
}

MlpModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string line;

  auto fail = [&](int lineno, const std::string& what) -> std::runtime_error {
    return std::runtime_error("model file " + path + ":" +
                              std::to_string(lineno) + ": " + what);
  };

  if (!std::getline(in, line) || line.rfind("layer_sizes: ", 0) != 0)
    throw fail(1, "expected 'layer_sizes: a,b,...'");
  std::vector<int> ls;
  {
    std::stringstream ss(line.substr(13));
    std::string tok;
    while (std::getline(ss, tok, ',')) ls.push_back(std::stoi(tok));
  }

  if (!std::getline(in, line) || line.rfind("bounds: ", 0) != 0)
    throw fail(2, "expected 'bounds: dh_train,v0_max,T'");
  DomainBounds bounds;
  {
    std::stringstream ss(line.substr(8));
    std::string tok;
    double* fields[3] = {&bounds.dh_train, &bounds.v0_max, &bounds.time_window};
    for (int i = 0; i < 3; ++i) {
      if (!std::getline(ss, tok, ',')) throw fail(2, "bounds needs 3 values");
      *fields[i] = std::stod(tok);
    }
  }

  MlpModel model = MlpModel::zeros(ls, bounds);
  Eigen::VectorXd theta(model.n_params());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!std::getline(in, line))
      throw fail(3 + static_cast<int>(i), "unexpected end of file, expected " +
                                              std::to_string(theta.size()) +
                                              " parameters");
    try {
      theta[i] = std::stod(line);
    } catch (const std::exception&) {
      throw fail(3 + static_cast<int>(i), "bad parameter value: " + line);
    }
  }
  model.unflatten(theta);
  return model;
}

}  // namespace p2f
