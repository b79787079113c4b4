#pragma once

#include "qenr/config.hpp"

#include <string>
#include <vector>

// Experiment orchestration: runs the configured sweeps, emits plot-ready
// CSV files plus a plain-text manifest, and produces the human-readable
// pre-run summary of derived quantities.

namespace qenr {

inline constexpr const char* kVersion = "0.1.0";

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
  std::string timestamp;  // ISO 8601 UTC
  std::string directory;
  std::vector<std::string> files;  // relative to directory, manifest included
  bool complete = false;
};

struct RunOptions {
  // Output directory precedence: this override, then the QENR_OUT_DIR
  // environment variable, then the config's [output] directory.
  std::string out_dir_override;
  int threads = 1;
};

// Executes every requested sweep and writes:
//   fig2_entanglement.csv, fig3_covariance.csv, fig4_enhancement.csv,
//   roc_quantum.csv / roc_classical.csv, roc_summary.csv, manifest.txt
// (subset per config.sweeps and source kind). CSV bytes depend only on
// (config, seed). On failure the manifest is written with
// status = incomplete and the error is rethrown.
RunManifest run_experiment(const ExperimentConfig& config,
                           const RunOptions& options = {});

// Pre-run table of derived quantities per grid point (squeezing, system
// noise, analytic PPT eigenvalues and enhancement) for eyeball checks.
std::string describe(const ExperimentConfig& config);

// Reads an emitted fig4_enhancement.csv back into fit input points.
std::vector<EnhancementPoint> read_enhancement_csv(const std::string& path);

}  // namespace qenr
