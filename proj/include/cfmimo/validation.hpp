#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfmimo/oracle.hpp"

namespace cfmimo {

// Reproducible small instances (8 APs, 4 users, 2 users per RB, 4 APs per
// user) with the association sets and full-power coefficients of each
// approach built from one shared gain matrix. Powers are normalized, so the
// noise ratios fully determine the estimate variances.
struct ValidationInstance {
  SinrInputs cf, uc, su, mu;
};

ValidationInstance make_validation_instance(double noise_over_pu, double noise_over_pd,
                                            std::uint64_t seed);

struct ValidationRow {
  std::string form;  // "approach/direction"
  int user = 0;
  double closed_form = 0.0;    // tabulated prediction
  double reference = 0.0;      // exact-moment prediction
  double empirical = 0.0;      // simulated
  double rel_printed = 0.0;    // |empirical - closed_form| / closed_form
  double rel_reference = 0.0;  // |empirical - reference| / reference
  double empirical_se = 0.0;   // jackknife standard error of `empirical`;
                               // deviations within ~3 se are sampling noise,
                               // not evidence against a formula
};

struct ValidationReport {
  std::vector<ValidationRow> rows;  // the nine tabulated SINR forms, per user
  std::vector<TermProbe> terms;     // decomposition-term diagnostics
};

// Simulates all nine tabulated SINR expressions against the symbol-level
// oracle and probes the individual decomposition terms. The default scenario
// has equal uplink/downlink noise ratios (matching the reference power
// settings); term probes run on an unequal-ratio instance, which separates
// the uplink and downlink estimate variances and is therefore stricter.
ValidationReport run_validation_suite(long num_symbols, int num_realizations,
                                      std::uint64_t seed);

struct WaveformCheck {
  std::string name;
  double flat_empirical = 0.0;
  double waveform_empirical = 0.0;
  double closed_form = 0.0;
  double rel_cross = 0.0;  // |waveform - flat| / flat
};

// Cross-validates the full time-domain OFDM chain against the flat-fading
// oracle: adequate CP must agree, and a too-short CP must degrade the
// measured SINR.
std::vector<WaveformCheck> run_waveform_checks(std::uint64_t seed);

}  // namespace cfmimo
