#pragma once

#include <cstdint>
#include <string>

namespace cfmimo {

// All simulation parameters. Defaults are the reference scenario used by the
// bundled experiments: 256 APs and 16 users in a 1 km disc, 5 MHz band.
struct SystemConfig {
  int num_aps = 256;             // M
  int num_users = 16;            // K
  double radius = 1.0;           // km
  double p_d = 0.2;              // W, per-AP downlink symbol power
  double p_u = 0.2;              // W, per-user uplink symbol power
  double noise_density = -174.0; // dBm/Hz
  double noise_figure = 9.0;     // dB
  double bandwidth = 5e6;        // Hz
  double shadow_std = 8.0;       // dB
  double f_c = 2000.0;           // MHz
  double h_ap = 12.0;            // m
  double h_ue = 1.7;             // m
  double d0 = 0.01;              // km, inner breakpoint
  double d1 = 0.05;              // km, outer breakpoint
  int users_per_rb = 4;          // N_u
  int aps_per_user = 5;          // M_s
  double threshold_coeff = 1.0;  // epsilon, for threshold AP selection
  int drops = 300;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument on an inconsistent configuration.
  // users_per_rb is clamped to num_users rather than rejected.
  void validate();
};

// sigma_z^2 = density + 10*lg(bandwidth) + noise figure, returned in watts.
double noise_power(const SystemConfig& cfg);

// Flat key = value file (TOML subset: comments with '#', blank lines, no
// sections). Every key is optional and must name a SystemConfig field.
SystemConfig load_config_file(const std::string& path);

// Same grammar, from an in-memory string.
SystemConfig parse_config(const std::string& text);

}  // namespace cfmimo
