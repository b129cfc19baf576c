#pragma once

#include <cstdint>
#include <random>

#include "cfmimo/config.hpp"
#include "cfmimo/topology.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo {

struct LargeScaleMatrix {
  MatrixXd beta;         // linear power gain, M x K
  MatrixXd pathloss_db;  // M x K
  MatrixXd shadow_db;    // M x K
};

enum class PathLossBranch { BelowD0, Middle, Far };

// Fixed loss at the reference distance (dB). f_c in MHz, heights in meters.
double reference_loss(double f_c_mhz, double h_ap_m, double h_ue_m);

// Three-slope distance-dependent gain in dB (negative). d in km.
double path_loss(double d_km, const SystemConfig& cfg);
PathLossBranch path_loss_branch(double d_km, const SystemConfig& cfg);

// beta = 10^((pathloss + shadowing)/10), shadowing iid N(0, shadow_std^2) dB.
LargeScaleMatrix large_scale_matrix(const Topology& topo, const SystemConfig& cfg,
                                    std::mt19937_64& g);

}  // namespace cfmimo
