#pragma once

#include <cstdint>
#include <random>

#include "cfmimo/types.hpp"

namespace cfmimo {

// Independent generator for a (seed, drop, lane) triple. Drops can then be
// evaluated in any order, on any number of workers, with identical output.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t drop, std::uint64_t lane);

// Uniform on (0,1]; never returns 0 so log() is safe.
double uniform01(std::mt19937_64& g);

// Standard normal via Box-Muller; stateless (one value per call).
double normal(std::mt19937_64& g);

// CN(0, var): circularly-symmetric complex Gaussian.
cd cnormal(std::mt19937_64& g, double var = 1.0);

void fill_cnormal(Eigen::Ref<MatrixXcd> out, double var, std::mt19937_64& g);

}  // namespace cfmimo
