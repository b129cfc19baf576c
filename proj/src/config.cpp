#include "cfmimo/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cfmimo {

void SystemConfig::validate() {
  if (num_users < 1) throw std::invalid_argument("num_users must be >= 1");
  if (num_aps < num_users) throw std::invalid_argument("num_aps must be >= num_users");
  if (aps_per_user < 1 || aps_per_user > num_aps)
    throw std::invalid_argument("aps_per_user must be in [1, num_aps]");
  if (!(d0 < d1 && d1 < radius)) throw std::invalid_argument("require d0 < d1 < radius");
  if (p_d <= 0 || p_u <= 0) throw std::invalid_argument("powers must be > 0");
  if (bandwidth <= 0) throw std::invalid_argument("bandwidth must be > 0");
  if (shadow_std < 0) throw std::invalid_argument("shadow_std must be >= 0");
  if (threshold_coeff < 0) throw std::invalid_argument("threshold_coeff must be >= 0");
  if (drops < 1) throw std::invalid_argument("drops must be >= 1");
  if (users_per_rb < 1) throw std::invalid_argument("users_per_rb must be >= 1");
  users_per_rb = std::min(users_per_rb, num_users);
}

double noise_power(const SystemConfig& cfg) {
  const double dbm = cfg.noise_density + 10.0 * std::log10(cfg.bandwidth) + cfg.noise_figure;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

SystemConfig parse_config(const std::string& text) {
  SystemConfig cfg;
  const std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"num_aps", [&](const std::string& v) { cfg.num_aps = std::stoi(v); }},
      {"num_users", [&](const std::string& v) { cfg.num_users = std::stoi(v); }},
      {"radius", [&](const std::string& v) { cfg.radius = std::stod(v); }},
      {"p_d", [&](const std::string& v) { cfg.p_d = std::stod(v); }},
      {"p_u", [&](const std::string& v) { cfg.p_u = std::stod(v); }},
      {"noise_density", [&](const std::string& v) { cfg.noise_density = std::stod(v); }},
      {"noise_figure", [&](const std::string& v) { cfg.noise_figure = std::stod(v); }},
      {"bandwidth", [&](const std::string& v) { cfg.bandwidth = std::stod(v); }},
      {"shadow_std", [&](const std::string& v) { cfg.shadow_std = std::stod(v); }},
      {"f_c", [&](const std::string& v) { cfg.f_c = std::stod(v); }},
      {"h_ap", [&](const std::string& v) { cfg.h_ap = std::stod(v); }},
      {"h_ue", [&](const std::string& v) { cfg.h_ue = std::stod(v); }},
      {"d0", [&](const std::string& v) { cfg.d0 = std::stod(v); }},
      {"d1", [&](const std::string& v) { cfg.d1 = std::stod(v); }},
      {"users_per_rb", [&](const std::string& v) { cfg.users_per_rb = std::stoi(v); }},
      {"aps_per_user", [&](const std::string& v) { cfg.aps_per_user = std::stoi(v); }},
      {"threshold_coeff", [&](const std::string& v) { cfg.threshold_coeff = std::stod(v); }},
      {"drops", [&](const std::string& v) { cfg.drops = std::stoi(v); }},
      {"seed", [&](const std::string& v) { cfg.seed = std::stoull(v); }},
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    try {
      it->second(val);
    } catch (const std::exception&) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace cfmimo
