#pragma once

#include "qenr/analysis.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Experiment configuration: a small sectioned key = value format with
// '#'/';' comments. Unknown keys and out-of-range values are rejected with
// line-numbered messages; defaults follow the reference scene (rho = 0.99,
// T_N = 8 K, 61.1 dB gain, modes at 4.5 and 6.5 GHz).

namespace qenr {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SourceSelection { kQuantum, kClassical, kBoth };

struct ExperimentConfig {
  // [source]
  SourceSelection kind = SourceSelection::kBoth;
  std::vector<double> photon_grid;  // required: n, n_grid, or pump_grid
  double rho = 0.99;
  double kappa = 1.0;

  // [chain] (gain stored linear; configured in dB)
  ChainParams chain;

  // [receiver]
  std::int64_t samples = 0;  // required, >= 2
  std::int64_t roc_samples = 10000;
  int trials = 1000;
  std::uint64_t seed = 1;

  // [analysis]
  std::vector<std::string> sweeps;  // subset of the known sweep names
  std::vector<double> pfa_grid;

  // [output]
  std::string directory = "out";
  std::vector<std::string> formats;  // only "csv" is known

  bool wants(const std::string& sweep) const;
};

// Parses and fully validates; defaults applied. Throws ConfigError with a
// "line N:" prefix for syntax, unknown-key, and range problems.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config_file(const std::string& path);

// Canonical text form: fixed section/key order, normalized numbers.
// canonicalize(parse_config(canonicalize(c))) == canonicalize(c).
std::string canonicalize(const ExperimentConfig& config);

// FNV-1a 64 over the canonical text.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string config_hash_hex(const ExperimentConfig& config);

}  // namespace qenr
