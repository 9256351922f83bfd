#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "p2f/config.hpp"
#include "p2f/tank.hpp"

#include <fstream>
#include <random>

using namespace p2f;

namespace {

SystemState make_state(std::initializer_list<double> h) {
  SystemState s;
  s.levels = Eigen::VectorXd(static_cast<Eigen::Index>(h.size()));
  Eigen::Index i = 0;
  for (double v : h) s.levels[i++] = v;
  s.velocities = Eigen::VectorXd::Zero(s.levels.size() - 1);
  return s;
}

}  // namespace

TEST_CASE("fp_area follows the diameter") {
  TankNetworkConfig cfg;
  CHECK(cfg.fp_area() == doctest::Approx(M_PI * 0.01).epsilon(1e-15));
}

TEST_CASE("driving_head examples") {
  CHECK(driving_head(make_state({2, 0, 0, 0, 0, 0}), 1) == 2.0);
  CHECK(driving_head(make_state({1.0, 0.5, 0.5, 0, 0, 0}), 2) == 0.0);
  CHECK(driving_head(make_state({1.3, 0.7, 0, 0, 0, 0}), 1) ==
        doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("driving_head rejects out-of-range indices") {
  const auto s = make_state({2, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(driving_head(s, 0), std::out_of_range);
  CHECK_THROWS_AS(driving_head(s, 6), std::out_of_range);
}

TEST_CASE("void_fraction examples") {
  TankNetworkConfig cfg;
  CHECK(void_fraction(make_state({2, 0, 0, 0, 0, 0}), 1, cfg) == 0.0);
  CHECK(void_fraction(make_state({0, 1, 0, 0, 0, 0}), 1, cfg) == 1.0);
  CHECK(void_fraction(make_state({cfg.dry_threshold / 2, 0, 0, 0, 0, 0}), 1,
                      cfg) == 1.0);
}

TEST_CASE("driving_head and void_fraction properties on random states") {
  TankNetworkConfig cfg;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> level(0.0, cfg.tank_height);
  for (int trial = 0; trial < 200; ++trial) {
    SystemState s = SystemState::zero(cfg);
    for (int i = 0; i < cfg.n_tanks; ++i) s.levels[i] = level(rng);
    for (int j = 1; j <= cfg.n_paths(); ++j) {
      const double dh = driving_head(s, j);
      CHECK(dh >= 0.0);
      CHECK(dh <= cfg.tank_height);
      const double a = void_fraction(s, j, cfg);
      CHECK((a == 0.0 || a == 1.0));
    }
  }
}

TEST_CASE("void_fraction is monotone at the dry threshold") {
  TankNetworkConfig cfg;
  auto s = make_state({0, 0, 0, 0, 0, 0});
  s.levels[0] = cfg.dry_threshold;
  CHECK(void_fraction(s, 1, cfg) == 1.0);
  s.levels[0] = cfg.dry_threshold * (1 + 1e-6);
  CHECK(void_fraction(s, 1, cfg) == 0.0);
}

TEST_CASE("config validation rejects bad values") {
  TankNetworkConfig cfg;
  cfg.n_tanks = 1;
  CHECK_THROWS(cfg.validate());
  cfg = TankNetworkConfig{};
  cfg.gravity = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg = TankNetworkConfig{};
  cfg.open_fraction = 1.5;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("key=value config file round trip") {
  const std::string path = "test_config_tmp.txt";
  {
    std::ofstream f(path);
    f << "# comment line\n"
      << "n_tanks=4\n"
      << "loss_coeff = 2.5   # inline comment\n"
      << "dt=0.5\n"
      << "lr_schedule=1:1e-2,50:1e-3\n"
      << "layer_sizes=3,8,1\n";
  }
  const AppConfig cfg = load_config(path);
  CHECK(cfg.tank.n_tanks == 4);
  CHECK(cfg.tank.loss_coeff == 2.5);
  CHECK(cfg.fdm.dt == 0.5);
  CHECK(cfg.train.lr_schedule.size() == 2);
  CHECK(cfg.train.lr_at(1) == 1e-2);
  CHECK(cfg.train.lr_at(50) == 1e-3);
  CHECK(cfg.train.layer_sizes == std::vector<int>{3, 8, 1});
  std::remove(path.c_str());
}

TEST_CASE("unknown config keys are rejected") {
  const std::string path = "test_config_bad_tmp.txt";
  {
    std::ofstream f(path);
    f << "no_such_key=1\n";
  }
  CHECK_THROWS(load_config(path));
  std::remove(path.c_str());
}
