#pragma once

#include "p2f/tank.hpp"

#include <string>
#include <vector>

namespace p2f {

// Time-series of states, one snapshot per stored step including t=0.
struct Trajectory {
  std::vector<double> times;
  std::vector<SystemState> states;

  size_t size() const { return times.size(); }

  void push(const SystemState& s) {
    times.push_back(s.time);
    states.push_back(s);
  }
};

// CSV export: header `t,h1..hN,v1..vM`, 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

Trajectory read_trajectory_csv(const std::string& path);

}  // namespace p2f
