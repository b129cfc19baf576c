#include "cfmimo/ofdm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cfmimo/rng.hpp"

namespace cfmimo {

namespace {

VectorXcd effective_taps(const TapChannel& ch) {
  return std::sqrt(ch.large_scale) * ch.taps;
}

// Causal linear convolution truncated to x.size() samples.
VectorXcd convolve_truncated(const VectorXcd& x, const VectorXcd& h) {
  const Eigen::Index n = x.size();
  const Eigen::Index l = h.size();
  VectorXcd y = VectorXcd::Zero(n);
  for (Eigen::Index tap = 0; tap < l; ++tap) {
    const Eigen::Index len = n - tap;
    if (len <= 0) break;
    y.segment(tap, len) += h(tap) * x.head(len);
  }
  return y;
}

}  // namespace

MatrixXcd dft_matrix(int n) {
  if (n < 1) throw std::invalid_argument("dft_matrix: size must be positive");
  MatrixXcd d(n, n);
  const double w = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      // Reduce r*c mod n first so large blocks keep full phase accuracy.
      const long long k = (static_cast<long long>(r) * c) % n;
      d(r, c) = std::polar(1.0, w * static_cast<double>(k));
    }
  return d;
}

VectorXcd ofdm_modulate(const VectorXcd& freq) {
  const int n = static_cast<int>(freq.size());
  return dft_matrix(n).adjoint() * freq / static_cast<double>(n);
}

VectorXcd ofdm_demodulate(const VectorXcd& time) {
  const int n = static_cast<int>(time.size());
  return dft_matrix(n) * time;
}

VectorXcd add_cp(const VectorXcd& block, int l_cp) {
  if (l_cp < 0 || l_cp > block.size())
    throw std::invalid_argument("add_cp: prefix length must lie in [0, block size]");
  VectorXcd out(block.size() + l_cp);
  out.head(l_cp) = block.tail(l_cp);
  out.tail(block.size()) = block;
  return out;
}

VectorXcd remove_cp(const VectorXcd& block, int l_cp) {
  if (l_cp < 0 || l_cp >= block.size())
    throw std::invalid_argument("remove_cp: prefix length must lie in [0, block size)");
  return block.tail(block.size() - l_cp);
}

VectorXcd channel_apply(const VectorXcd& x, const TapChannel& ch, double noise_std,
                        std::mt19937_64& g) {
  if (ch.taps.size() < 1) throw std::invalid_argument("channel_apply: channel has no taps");
  VectorXcd y = convolve_truncated(x, effective_taps(ch));
  if (noise_std > 0.0)
    for (Eigen::Index i = 0; i < y.size(); ++i)
      y(i) += cd(noise_std * normal(g), noise_std * normal(g));
  return y;
}

VectorXcd freq_response(const TapChannel& ch, int n) {
  if (ch.taps.size() > n)
    throw std::invalid_argument("freq_response: more taps than subcarriers");
  VectorXcd padded = VectorXcd::Zero(n);
  padded.head(ch.taps.size()) = effective_taps(ch);
  return dft_matrix(n) * padded;
}

double decomposition_residual(const VectorXcd& freq, const TapChannel& ch, int n, int l_cp) {
  if (freq.size() != n)
    throw std::invalid_argument("decomposition_residual: symbol size mismatch");
  std::mt19937_64 unused(0);
  const VectorXcd tx = add_cp(ofdm_modulate(freq), l_cp);
  const VectorXcd rx = channel_apply(tx, ch, 0.0, unused);
  const VectorXcd received = ofdm_demodulate(remove_cp(rx, l_cp));
  const VectorXcd model = freq_response(ch, n).cwiseProduct(freq);
  return (received - model).cwiseAbs().maxCoeff();
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

TapChannel tap_gains_from_paths(const std::vector<std::pair<double, double>>& paths,
                                double t_s, double f_c, int l) {
  if (l < 1) throw std::invalid_argument("tap_gains_from_paths: need at least one tap");
  if (t_s <= 0.0) throw std::invalid_argument("tap_gains_from_paths: sample period must be positive");
  TapChannel ch;
  ch.taps = VectorXcd::Zero(l);
  for (const auto& [amp, tau] : paths) {
    const cd rot = std::polar(amp, -2.0 * std::numbers::pi * f_c * tau);
    for (int tap = 0; tap < l; ++tap) ch.taps(tap) += rot * sinc(tap - tau / t_s);
  }
  return ch;
}

}  // namespace cfmimo
