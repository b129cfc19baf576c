#pragma once

#include <random>
#include <utility>
#include <vector>

#include "cfmimo/types.hpp"

namespace cfmimo {

// Multipath channel as sampled tap gains plus a separate large-scale power
// gain; the effective filter is sqrt(large_scale) * taps.
struct TapChannel {
  VectorXcd taps;
  double large_scale = 1.0;
};

// D(n, n') = exp(-2*pi*j*n*n'/N); inverse is D^*/N.
MatrixXcd dft_matrix(int n);

// x = (1/N) D^* x_tilde
VectorXcd ofdm_modulate(const VectorXcd& freq);
// x_tilde = D x
VectorXcd ofdm_demodulate(const VectorXcd& time);

// Prepend the last l_cp samples. Throws std::invalid_argument if l_cp exceeds
// the block length.
VectorXcd add_cp(const VectorXcd& block, int l_cp);
// Drop the first l_cp samples (inverse of add_cp).
VectorXcd remove_cp(const VectorXcd& block, int l_cp);

// Causal linear convolution with the effective filter, truncated to the input
// length, plus AWGN with the given per-dimension standard deviation. Works on
// blocks of any length, including whole concatenated symbol streams.
VectorXcd channel_apply(const VectorXcd& x, const TapChannel& ch, double noise_std,
                        std::mt19937_64& g);

// Per-subcarrier gains: D * zero_pad(effective taps, N).
VectorXcd freq_response(const TapChannel& ch, int n);

// Max |full time-domain chain - per-subcarrier model| over one noise-free
// block. Small (< 1e-9) iff the CP covers the channel memory.
double decomposition_residual(const VectorXcd& freq, const TapChannel& ch, int n, int l_cp);

// Tap gains from a physical path list (attenuation, delay seconds), sampled
// at T_s with carrier f_c (Hz):
//   h_l = sum_i a_i * exp(-2*pi*j*f_c*tau_i) * sinc(l - tau_i/T_s).
// sinc here is the normalized kernel sin(pi x)/(pi x), sinc(0)=1, so a path
// delayed by an integer number of samples lands on exactly one tap and tap
// energy equals path energy.
TapChannel tap_gains_from_paths(const std::vector<std::pair<double, double>>& paths,
                                double t_s, double f_c, int l);

double sinc(double x);

}  // namespace cfmimo
