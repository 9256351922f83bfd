#include "p2f/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace p2f {

void TankNetworkConfig::validate() const {
  if (n_tanks < 2) throw std::invalid_argument("n_tanks must be >= 2");
  for (auto [v, name] : {std::pair{tank_area, "tank_area"},
                         {tank_height, "tank_height"},
                         {fp_diameter, "fp_diameter"},
                         {inertial_length, "inertial_length"},
                         {elevation_drop, "elevation_drop"},
                         {loss_coeff, "loss_coeff"},
                         {gravity, "gravity"},
                         {density, "density"},
                         {dry_threshold, "dry_threshold"}}) {
    if (!(v > 0.0))
      throw std::invalid_argument(std::string(name) + " must be > 0");
  }
  if (!(open_fraction > 0.0 && open_fraction <= 1.0))
    throw std::invalid_argument("open_fraction must be in (0, 1]");
}

void DomainBounds::validate() const {
  if (!(dh_train > 0.0 && v0_max > 0.0 && time_window > 0.0))
    throw std::invalid_argument("domain bounds must be strictly positive");
}

void FdmConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  if (!(friction_iter_tol > 0.0))
    throw std::invalid_argument("friction_iter_tol must be > 0");
  if (friction_iter_max < 1)
    throw std::invalid_argument("friction_iter_max must be >= 1");
  if (substeps_per_dt < 1)
    throw std::invalid_argument("substeps_per_dt must be >= 1");
}

double TrainConfig::lr_at(int epoch) const {
  double lr = lr_schedule.front().second;
  for (const auto& [milestone, eta] : lr_schedule) {
    if (epoch >= milestone) lr = eta;
  }
  return lr;
}

void TrainConfig::validate() const {
  if (n_epochs < 1) throw std::invalid_argument("n_epochs must be >= 1");
  if (lr_schedule.empty() || lr_schedule.front().first != 1)
    throw std::invalid_argument("lr_schedule must start at epoch 1");
  for (size_t i = 1; i < lr_schedule.size(); ++i)
    if (lr_schedule[i].first <= lr_schedule[i - 1].first)
      throw std::invalid_argument("lr_schedule milestones must increase");
  if (!(clip_norm > 0.0)) throw std::invalid_argument("clip_norm must be > 0");
  if (val_every < 1) throw std::invalid_argument("val_every must be >= 1");
  if (n_train < 1 || n_val < 1)
    throw std::invalid_argument("collocation set sizes must be >= 1");
  if (!(r_h0 >= 0.0 && r_h0 < 1.0 && r_v0 >= 0.0 && r_v0 < 1.0))
    throw std::invalid_argument("boundary ratios must be in [0, 1)");
  if (layer_sizes.size() < 2 || layer_sizes.front() != 3 ||
      layer_sizes.back() != 1)
    throw std::invalid_argument("layer_sizes must run from width 3 to width 1");
}

namespace {

double to_double(const std::string& key, const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad numeric value for " + key + ": " + s);
  }
}

long long to_int(const std::string& key, const std::string& s) {
  try {
    size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad integer value for " + key + ": " + s);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

AppConfig parse_config(const std::map<std::string, std::string>& kv) {
  AppConfig c;
  for (const auto& [key, raw] : kv) {
    const std::string val = trim(raw);
    if (key == "n_tanks") c.tank.n_tanks = static_cast<int>(to_int(key, val));
    else if (key == "tank_area") c.tank.tank_area = to_double(key, val);
    else if (key == "tank_height") c.tank.tank_height = to_double(key, val);
    else if (key == "fp_diameter") c.tank.fp_diameter = to_double(key, val);
    else if (key == "inertial_length") c.tank.inertial_length = to_double(key, val);
    else if (key == "elevation_drop") c.tank.elevation_drop = to_double(key, val);
    else if (key == "open_fraction") c.tank.open_fraction = to_double(key, val);
    else if (key == "loss_coeff") c.tank.loss_coeff = to_double(key, val);
    else if (key == "gravity") c.tank.gravity = to_double(key, val);
    else if (key == "density") c.tank.density = to_double(key, val);
    else if (key == "dry_threshold") c.tank.dry_threshold = to_double(key, val);
    else if (key == "dh_train") c.bounds.dh_train = to_double(key, val);
    else if (key == "v0_max") c.bounds.v0_max = to_double(key, val);
    else if (key == "time_window") c.bounds.time_window = to_double(key, val);
    else if (key == "dt") c.fdm.dt = to_double(key, val);
    else if (key == "t_end") c.fdm.t_end = to_double(key, val);
    else if (key == "friction_iter_tol") c.fdm.friction_iter_tol = to_double(key, val);
    else if (key == "friction_iter_max") c.fdm.friction_iter_max = static_cast<int>(to_int(key, val));
    else if (key == "substeps_per_dt") c.fdm.substeps_per_dt = static_cast<int>(to_int(key, val));
    else if (key == "n_epochs") c.train.n_epochs = static_cast<int>(to_int(key, val));
    else if (key == "clip_norm") c.train.clip_norm = to_double(key, val);
    else if (key == "val_every") c.train.val_every = static_cast<int>(to_int(key, val));
    else if (key == "seed") c.train.seed = static_cast<unsigned long long>(to_int(key, val));
    else if (key == "beta1") c.train.beta1 = to_double(key, val);
    else if (key == "beta2") c.train.beta2 = to_double(key, val);
    else if (key == "adam_eps") c.train.adam_eps = to_double(key, val);
    else if (key == "n_train") c.train.n_train = static_cast<int>(to_int(key, val));
    else if (key == "n_val") c.train.n_val = static_cast<int>(to_int(key, val));
    else if (key == "r_h0") c.train.r_h0 = to_double(key, val);
    else if (key == "r_v0") c.train.r_v0 = to_double(key, val);
    else if (key == "layer_sizes") {
      c.train.layer_sizes.clear();
      for (const auto& tok : split(val, ','))
        c.train.layer_sizes.push_back(static_cast<int>(to_int(key, trim(tok))));
    } else if (key == "lr_schedule") {
      // e.g. lr_schedule=1:1e-3,8000:1e-4,16000:1e-5
      c.train.lr_schedule.clear();
      for (const auto& tok : split(val, ',')) {
        const auto parts = split(trim(tok), ':');
        if (parts.size() != 2)
          throw std::runtime_error("config: bad lr_schedule entry: " + tok);
        c.train.lr_schedule.emplace_back(
            static_cast<int>(to_int(key, trim(parts[0]))),
            to_double(key, trim(parts[1])));
      }
    } else {
      throw std::runtime_error("config: unknown key: " + key);
    }
  }
  c.tank.validate();
  c.bounds.validate();
  c.fdm.validate();
  c.train.validate();
  return c;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: " + path + ":" +
                               std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return parse_config(kv);
}

}  // namespace p2f
