#include "p2f/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace p2f {

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].levels.size());
  const int m = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].velocities.size());
  std::fprintf(f, "t");
  for (int i = 1; i <= n; ++i) std::fprintf(f, ",h%d", i);
  for (int j = 1; j <= m; ++j) std::fprintf(f, ",v%d", j);
  std::fprintf(f, "\n");
  for (size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    std::fprintf(f, "%.17g", traj.times[k]);
    for (int i = 0; i < n; ++i) std::fprintf(f, ",%.17g", s.levels[i]);
    for (int j = 0; j < m; ++j) std::fprintf(f, ",%.17g", s.velocities[j]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("empty trajectory file: " + path);
  int n = 0, m = 0;
  {
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ',')) {
      if (col.size() > 1 && col[0] == 'h') ++n;
      if (col.size() > 1 && col[0] == 'v') ++m;
    }
  }
  Trajectory traj;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    SystemState s;
    s.levels.resize(n);
    s.velocities.resize(m);
    std::getline(ss, cell, ',');
    s.time = std::stod(cell);
    for (int i = 0; i < n; ++i) {
      std::getline(ss, cell, ',');
      s.levels[i] = std::stod(cell);
    }
    for (int j = 0; j < m; ++j) {
      std::getline(ss, cell, ',');
      s.velocities[j] = std::stod(cell);
    }
    traj.push(s);
  }
  return traj;
}

}  // namespace p2f
