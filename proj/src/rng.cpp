#include "cfmimo/rng.hpp"

#include <cmath>
#include <numbers>

namespace cfmimo {

namespace {
// SplitMix64: mixes the stream coordinates into well-separated seed material.
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t drop, std::uint64_t lane) {
  std::uint64_t x = seed;
  std::uint64_t a = splitmix64(x);
  x ^= drop * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
  std::uint64_t b = splitmix64(x);
  x ^= lane * 0xda942042e4dd58b5ULL + 0x9e3779b97f4a7c15ULL;
  std::uint64_t c = splitmix64(x);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& g) {
  return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;
}

double normal(std::mt19937_64& g) {
  const double u1 = uniform01(g);
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cd cnormal(std::mt19937_64& g, double var) {
  const double u1 = uniform01(g);
  const double u2 = uniform01(g);
  const double amp = std::sqrt(-var * std::log(u1));
  const double ph = 2.0 * std::numbers::pi * u2;
  return {amp * std::cos(ph), amp * std::sin(ph)};
}

void fill_cnormal(Eigen::Ref<MatrixXcd> out, double var, std::mt19937_64& g) {
  // Bulk Box-Muller: drawing the uniforms first and batching the transforms
  // lets the compiler vectorize log/sqrt/sincos (the per-draw cost that
  // dominates the symbol-level simulators). The plain-pointer loop is what
  // the auto-vectorizer needs to emit vector-math calls.
  const Eigen::Index n = out.size();
  if (n == 0) return;
  ArrayXd u1(n), u2(n), re(n), im(n);
  for (Eigen::Index i = 0; i < n; ++i) u1(i) = uniform01(g);
  for (Eigen::Index i = 0; i < n; ++i) u2(i) = uniform01(g);
  const ArrayXd amp = (u1.log() * -var).sqrt();
  const ArrayXd ph = (2.0 * std::numbers::pi) * u2;
  const double* pa = amp.data();
  const double* pp = ph.data();
  double* pr = re.data();
  double* pi = im.data();
  for (Eigen::Index i = 0; i < n; ++i) {
    pr[i] = pa[i] * std::cos(pp[i]);
    pi[i] = pa[i] * std::sin(pp[i]);
  }
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i, ++idx) out(i, j) = cd(pr[idx], pi[idx]);
}

}  // namespace cfmimo
