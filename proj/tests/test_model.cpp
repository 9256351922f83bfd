#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "p2f/model.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

using namespace p2f;

namespace {
const DomainBounds kBounds;
}

TEST_CASE("DualScalar arithmetic obeys the chain rule") {
  const DualScalar a{1.5, 2.0};
  const DualScalar b{-0.5, 3.0};
  const DualScalar prod = a * b;
  CHECK(prod.value == doctest::Approx(-0.75));
  CHECK(prod.d_dt == doctest::Approx(2.0 * -0.5 + 1.5 * 3.0));
  const DualScalar th = tanh(a);
  const double t = std::tanh(1.5);
  CHECK(th.value == doctest::Approx(t));
  CHECK(th.d_dt == doctest::Approx((1.0 - t * t) * 2.0));
}

TEST_CASE("zero model outputs zero everywhere") {
  const MlpModel m = MlpModel::zeros({3, 8, 8, 1}, kBounds);
  CHECK(forward(m, {0.3, 0.7, 0.1}) == 0.0);
  const auto d = forward_dual(m, 0.3, 0.7, 0.1);
  CHECK(d.value == 0.0);
  CHECK(d.dvalue_dt == 0.0);
}

TEST_CASE("single linear layer hand arithmetic") {
  MlpModel m = MlpModel::zeros({3, 1}, kBounds);
  m.weights[0] << 1.0, 2.0, 3.0;
  m.biases[0] << 0.5;
  CHECK(forward(m, {1.0, 1.0, 1.0}) == doctest::Approx(6.5).epsilon(1e-15));
}

TEST_CASE("forward is deterministic for a seeded model") {
  const MlpModel a = MlpModel::random_init({3, 16, 16, 1}, kBounds, 123);
  const MlpModel b = MlpModel::random_init({3, 16, 16, 1}, kBounds, 123);
  const Eigen::Vector3d x{0.2, 0.9, 0.4};
  CHECK(forward(a, x) == forward(b, x));
}

TEST_CASE("forward_dual value equals forward bit-identically") {
  const MlpModel m = MlpModel::random_init({3, 16, 16, 1}, kBounds, 7);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double dh_bar = u(rng), t = u(rng) * kBounds.time_window,
                 v0_bar = u(rng);
    const auto d = forward_dual(m, dh_bar, t, v0_bar);
    const double f =
        forward(m, {dh_bar, t / kBounds.time_window, v0_bar});
    CHECK(d.value == f);
  }
}

TEST_CASE("forward_dual time derivative matches central differences") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int seed = 0; seed < 5; ++seed) {
    const MlpModel m = MlpModel::random_init({3, 16, 16, 1}, kBounds, seed);
    for (int i = 0; i < 20; ++i) {
      const double dh_bar = u(rng), v0_bar = u(rng);
      const double t = 0.1 + 0.8 * u(rng);
      const double h = 1e-5 * kBounds.time_window;
      const auto d = forward_dual(m, dh_bar, t, v0_bar);
      const double fd =
          (forward_dual(m, dh_bar, t + h, v0_bar).value -
           forward_dual(m, dh_bar, t - h, v0_bar).value) /
          (2 * h);
      CHECK(std::abs(d.dvalue_dt - fd) <=
            1e-7 * std::max(std::abs(fd), 1e-3));
    }
  }
}

TEST_CASE("model structurally independent of t has zero time derivative") {
  MlpModel m = MlpModel::random_init({3, 16, 1}, kBounds, 5);
  m.weights[0].col(1).setZero();  // t-bar input column
  const auto d = forward_dual(m, 0.4, 0.6, 0.2);
  CHECK(d.dvalue_dt == 0.0);
}

TEST_CASE("flatten/unflatten round trip") {
  const MlpModel a = MlpModel::random_init({3, 8, 4, 1}, kBounds, 99);
  MlpModel b = MlpModel::zeros({3, 8, 4, 1}, kBounds);
  b.unflatten(a.flatten());
  for (int k = 0; k < a.n_layers(); ++k) {
    CHECK((a.weights[k] - b.weights[k]).norm() == 0.0);
    CHECK((a.biases[k] - b.biases[k]).norm() == 0.0);
  }
  CHECK_THROWS(b.unflatten(Eigen::VectorXd::Zero(3)));
}

TEST_CASE("model save/load round trip is bit-exact") {
  const std::string path = "test_model_tmp.txt";
  const MlpModel a = MlpModel::random_init({3, 16, 16, 1}, kBounds, 2024);
  save_model(a, path);
  const MlpModel b = load_model(path);
  CHECK(a.layer_sizes == b.layer_sizes);
  CHECK(a.bounds.dh_train == b.bounds.dh_train);
  CHECK(a.bounds.v0_max == b.bounds.v0_max);
  CHECK(a.bounds.time_window == b.bounds.time_window);
  const Eigen::VectorXd ta = a.flatten(), tb = b.flatten();
  for (Eigen::Index i = 0; i < ta.size(); ++i) CHECK(ta[i] == tb[i]);
  std::remove(path.c_str());
}

TEST_CASE("corrupted model files fail with a parse location") {
  const std::string path = "test_model_bad_tmp.txt";
  {
    std::ofstream f(path);
    f << "layer_sizes: 3,4,1\nbounds: 2,8,1\n0.5\nnot_a_number\n";
  }
  try {
    load_model(path);
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":4") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("shape checks happen at construction") {
  CHECK_THROWS(MlpModel::zeros({4, 8, 1}, kBounds));  // bad input width
  CHECK_THROWS(MlpModel::zeros({3, 8, 2}, kBounds));  // bad output width
  CHECK_THROWS(MlpModel::zeros({3}, kBounds));
}
