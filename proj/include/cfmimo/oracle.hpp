#pragma once

#include <random>
#include <string>
#include <vector>

#include "cfmimo/sinr.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo {

// Downlink simulation/detection modes:
//   Coherent     user detects with its instantaneous downlink-pilot estimates
//   NonCoherent  user detects with the mean of those estimates (statistics)
//   Su           Coherent on single-user RBs, compared against the dedicated
//                single-user closed form
//   Cf / Uc      statistics-based detection of the benchmark schemes
enum class DlOracleVariant { Coherent, NonCoherent, Su, Cf, Uc };

struct OracleReport {
  std::vector<int> users;       // user index per entry
  VectorXd empirical_sinr;      // measured effective SINR
  VectorXd closed_form_sinr;    // tabulated closed-form prediction
  VectorXd rel_error;           // |emp - cf| / cf
  VectorXd empirical_se;        // jackknife standard error of empirical_sinr
                                // (delete-one-block over realization batches;
                                // +inf when only one realization was run)
  long num_symbols = 0;         // data symbols per channel realization
  int num_realizations = 0;
};

// Symbol-level Monte Carlo of one RB's uplink. Channels and both pilot
// estimates are drawn fresh each realization from their exact joint Gaussian
// law; every served user transmits unit-variance Gaussian symbols; the CPU
// combines with conjugated uplink estimates. Effective SINR follows the
// bounding convention: desired power = |mean signal coefficient|^2 over
// realizations, everything else (including symbol-level noise) counts as
// interference.
OracleReport simulate_uplink_rb(const SinrInputs& in, Approach approach, long num_symbols,
                                int num_realizations, std::mt19937_64& g);

// Downlink counterpart. APs precode with conjugated uplink estimates and the
// configured per-AP power coefficients; the user subtracts its presumed gain
// (per the variant) times the known symbol, and the residual power is the
// interference-plus-noise estimate.
OracleReport simulate_downlink_rb(const SinrInputs& in, DlOracleVariant variant,
                                  long num_symbols, int num_realizations,
                                  std::mt19937_64& g);

// Downlink effective SINR computed directly from the exact joint Gaussian
// moments of (channel, uplink estimate, downlink estimate) under the same
// detection conventions as the simulator. Serves as an analytic cross-check
// wherever a tabulated closed form and the simulation disagree.
double downlink_sinr_moment_reference(DlOracleVariant variant, int k, const SinrInputs& in);

// One decomposition-term diagnostic: the simulated statistic, the tabulated
// ("printed") prediction, and the prediction derived from the exact joint
// moments. A printed/derived split localizes any closed-form discrepancy to a
// specific term.
struct TermProbe {
  std::string name;
  double measured = 0.0;
  double printed = 0.0;
  double derived = 0.0;
};

std::vector<TermProbe> probe_uplink_terms(const SinrInputs& in, Approach approach, int k,
                                          int num_realizations, std::mt19937_64& g);
std::vector<TermProbe> probe_downlink_terms(const SinrInputs& in, DlOracleVariant variant,
                                            int k, int num_realizations, std::mt19937_64& g);

// Full time-domain OFDM validation: multipath taps, cyclic prefix, streaming
// convolution across symbol boundaries, demodulation, and per-subcarrier
// pilot estimation plus detection. With adequate CP the per-subcarrier law is
// exactly the flat-fading model, so the measured SINR must match
// simulate_downlink_rb.
struct WaveformParams {
  int num_subcarriers = 64;
  int cp_length = 8;
  int num_taps = 4;               // per-link channel memory
  int num_ofdm_symbols = 50;      // data symbols per realization
  int num_realizations = 200;
  bool allow_insufficient_cp = false;  // opt-in for ISI degradation studies
};

OracleReport simulate_waveform_rb(const SinrInputs& in, DlOracleVariant variant,
                                  const WaveformParams& params, std::mt19937_64& g);

}  // namespace cfmimo
