#pragma once

#include "cfmimo/config.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo {

struct Topology {
  MatrixXd ap_xy;    // M x 2, km
  MatrixXd user_xy;  // K x 2, km
};

// Uniform placement over the disc; pure function of (config.seed, drop_index).
Topology drop_topology(const SystemConfig& cfg, int drop_index);

// Pairwise AP-user distances in km, M x K.
MatrixXd distances(const Topology& topo);

}  // namespace cfmimo
