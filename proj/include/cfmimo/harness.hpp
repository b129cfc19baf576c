#pragma once

#include <map>
#include <string>
#include <vector>

#include "cfmimo/config.hpp"
#include "cfmimo/sinr.hpp"

namespace cfmimo {

enum class SelectionMode { FixedCount, Threshold };

struct RunOptions {
  SelectionMode selection = SelectionMode::FixedCount;
  // Which of {"cf", "uc", "su-oas", "mu-oas"} to evaluate; empty = all.
  // "mu-oas" also emits the non-coherent downlink rows ("mu-oas-noncoh").
  std::vector<std::string> approaches;
  int workers = 1;
};

struct SeRow {
  int drop = 0;
  int user = 0;
  std::string approach;   // cf | uc | su-oas | mu-oas | mu-oas-noncoh
  std::string direction;  // ul | dl
  double sinr = 0.0;
  double se = 0.0;  // bps/Hz
};

struct SeReport {
  SystemConfig config;
  SelectionMode selection = SelectionMode::FixedCount;
  std::vector<SeRow> rows;
};

// One Monte Carlo drop: one topology and shadowing draw, then the closed-form
// SINR/SE of every user under each enabled approach, both directions.
// Deterministic in (config.seed, drop_index); independent of evaluation order.
std::vector<SeRow> run_drop(const SystemConfig& cfg, int drop_index,
                            const RunOptions& opts = {});

// All drops, optionally spread over worker threads. Output is byte-identical
// for any worker count because each drop owns seeded RNG streams and a
// preassigned slot in the row list.
SeReport run_experiment(const SystemConfig& cfg, const RunOptions& opts = {});

struct SweepResult {
  std::string axis;  // "nu" (users per RB) or "ms" (APs per user)
  std::vector<int> values;
  // 5th-percentile SE curve per "approach/direction" key, same length as values.
  std::map<std::string, std::vector<double>> p5_curves;
};

// Re-runs the experiment per axis value with common random numbers (identical
// seed, hence identical topologies/shadowing), so curves vary only through
// the swept parameter.
SweepResult sweep(const SystemConfig& cfg, const std::string& axis,
                  const std::vector<int>& values, const RunOptions& opts = {});

// Canonical (approach, direction) key order used by all writers.
const std::vector<std::string>& canonical_keys();

// SE samples grouped by "approach/direction".
std::map<std::string, std::vector<double>> se_samples(const SeReport& report);

std::string samples_csv(const SeReport& report);
std::string cdf_csv(const SeReport& report);
std::string summary_json(const SeReport& report);
std::string sweep_csv(const SweepResult& result);

void write_file(const std::string& path, const std::string& content);

}  // namespace cfmimo
