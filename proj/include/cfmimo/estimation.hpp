#pragma once

#include <random>

#include "cfmimo/types.hpp"

namespace cfmimo {

// Variance of the MMSE channel estimate from a single pilot symbol of power p
// through a channel of large-scale gain beta: p*beta^2 / (p*beta + sigma2).
double mmse_gain(double beta, double p, double sigma2);

// MMSE estimate of g from the pilot observation r = sqrt(p)*g*pilot + noise.
cd mmse_estimate(cd r, cd pilot, double beta, double p, double sigma2);

// Elementwise mmse_gain over a gain matrix.
MatrixXd mmse_gain_matrix(const MatrixXd& beta, double p, double sigma2);

// One narrowband channel realization with its two pilot-based estimates:
// g_hat_ul from an uplink pilot of power p_u (variance alpha), g_hat_dl from
// an independent downlink pilot of power p_d (variance psi).
struct RbChannel {
  MatrixXcd g;         // true channel, M x K
  MatrixXcd g_hat_ul;  // M x K
  MatrixXcd g_hat_dl;  // M x K
};

RbChannel draw_rb_channel(const MatrixXd& beta, double p_u, double p_d, double sigma2,
                          std::mt19937_64& g);

}  // namespace cfmimo
