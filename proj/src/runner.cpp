#include "qenr/runner.hpp"

#include "qenr/rng.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qenr {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& hash,
            const std::vector<std::string>& columns)
      : out_(path, std::ios::binary) {
    if (!out_) {
      throw std::runtime_error("cannot open output file: " + path.string());
    }
    out_ << "# config_hash=" << hash << " version=" << kVersion << "\n";
    for (size_t i = 0; i < columns.size(); ++i) {
      out_ << (i ? "," : "") << columns[i];
    }
    out_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      out_ << (i ? "," : "") << cells[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

std::string resolve_out_dir(const ExperimentConfig& config,
                            const RunOptions& options) {
  if (!options.out_dir_override.empty()) return options.out_dir_override;
  if (const char* env = std::getenv("QENR_OUT_DIR");
      env != nullptr && *env != '\0') {
    return env;
  }
  return config.directory;
}

void write_fig2(const fs::path& dir, const std::string& hash,
                const SweepResult& sweep, std::vector<std::string>* files) {
  CsvWriter csv(dir / "fig2_entanglement.csv", hash,
                {"n", "r", "nu_min_quantum", "nu_min_classical",
                 "nu_min_quantum_expected", "nu_min_classical_expected"});
  for (const auto& p : sweep.points) {
    csv.row({fmt(p.photons), fmt(p.squeezing), fmt(p.nu_min_quantum),
             fmt(p.nu_min_classical), fmt(p.nu_min_quantum_expected),
             fmt(p.nu_min_classical_expected)});
  }
  files->push_back("fig2_entanglement.csv");
}

void write_fig3(const fs::path& dir, const std::string& hash,
                const SweepResult& sweep, std::vector<std::string>* files) {
  CsvWriter csv(dir / "fig3_covariance.csv", hash,
                {"n", "pd_measured", "pd_std_error", "pd_expected",
                 "cov_quantum", "cov_quantum_se", "cov_classical",
                 "cov_classical_se"});
  for (const auto& p : sweep.points) {
    csv.row({fmt(p.photons), fmt(p.pd_measured), fmt(p.pd_std_error),
             fmt(p.pd_expected), fmt(p.cov_quantum), fmt(p.cov_quantum_se),
             fmt(p.cov_classical), fmt(p.cov_classical_se)});
  }
  files->push_back("fig3_covariance.csv");
}

void write_fig4(const fs::path& dir, const std::string& hash,
                const SweepResult& sweep, std::vector<std::string>* files) {
  CsvWriter csv(dir / "fig4_enhancement.csv", hash,
                {"n", "pd", "enhancement", "enhancement_se",
                 "enhancement_model", "usable"});
  for (const auto& p : sweep.points) {
    csv.row({fmt(p.photons), fmt(p.pd_expected), fmt(p.enhancement),
             fmt(p.enhancement_se), fmt(p.enhancement_model_value),
             p.enhancement_usable ? "1" : "0"});
  }
  files->push_back("fig4_enhancement.csv");
}

void write_roc(const fs::path& dir, const std::string& hash,
               const ExperimentConfig& config, SourceKind kind,
               std::uint64_t seed, std::vector<std::string>* files) {
  SourceSpec spec;
  spec.kind = kind;
  // ROC at the midpoint of the grid: a single-power detection study.
  spec.photons = config.photon_grid[config.photon_grid.size() / 2];
  spec.rho = config.rho;
  const auto curve = roc_curve(spec, config.chain, config.roc_samples,
                               config.trials, seed);
  const std::string name = kind == SourceKind::kQuantum
                               ? "roc_quantum.csv"
                               : "roc_classical.csv";
  CsvWriter csv(dir / name, hash, {"threshold", "pfa", "pd"});
  for (const auto& p : curve) {
    csv.row({fmt(p.threshold), fmt(p.pfa), fmt(p.pd)});
  }
  files->push_back(name);

  const std::string summary_name = kind == SourceKind::kQuantum
                                       ? "roc_summary_quantum.csv"
                                       : "roc_summary_classical.csv";
  CsvWriter summary(dir / summary_name, hash, {"pfa_target", "pd"});
  for (const double pfa : config.pfa_grid) {
    summary.row({fmt(pfa), fmt(pd_at_pfa(curve, pfa))});
  }
  files->push_back(summary_name);
}

void write_manifest(const fs::path& dir, const RunManifest& manifest) {
  std::ofstream out(dir / "manifest.txt", std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write manifest in " + dir.string());
  }
  out << "config_hash = " << manifest.config_hash << "\n";
  out << "seed = " << manifest.seed << "\n";
  out << "version = " << manifest.version << "\n";
  out << "timestamp = " << manifest.timestamp << "\n";
  out << "status = " << (manifest.complete ? "complete" : "incomplete")
      << "\n";
  for (const auto& f : manifest.files) {
    out << "file = " << f << "\n";
  }
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config,
                           const RunOptions& options) {
  const fs::path dir = resolve_out_dir(config, options);
  fs::create_directories(dir);

  RunManifest manifest;
  manifest.config_hash = config_hash_hex(config);
  manifest.seed = config.seed;
  manifest.version = kVersion;
  manifest.timestamp = utc_timestamp();
  manifest.directory = dir.string();

  const bool needs_sweep = config.wants("entanglement") ||
                           config.wants("covariance") ||
                           config.wants("enhancement");
  try {
    if (needs_sweep) {
      SweepConfig sweep_config;
      sweep_config.photon_grid = config.photon_grid;
      sweep_config.chain = config.chain;
      sweep_config.rho = config.rho;
      sweep_config.samples = config.samples;
      sweep_config.seed = config.seed;
      sweep_config.threads = options.threads;
      const SweepResult sweep = run_sweep(sweep_config);
      if (config.wants("entanglement")) {
        write_fig2(dir, manifest.config_hash, sweep, &manifest.files);
      }
      if (config.wants("covariance")) {
        write_fig3(dir, manifest.config_hash, sweep, &manifest.files);
      }
      if (config.wants("enhancement")) {
        write_fig4(dir, manifest.config_hash, sweep, &manifest.files);
      }
    }
    if (config.wants("roc")) {
      if (config.kind != SourceSelection::kClassical) {
        write_roc(dir, manifest.config_hash, config, SourceKind::kQuantum,
                  derive_stream(config.seed, 0xA001), &manifest.files);
      }
      if (config.kind != SourceSelection::kQuantum) {
        write_roc(dir, manifest.config_hash, config, SourceKind::kClassical,
                  derive_stream(config.seed, 0xA002), &manifest.files);
      }
    }
  } catch (...) {
    manifest.files.push_back("manifest.txt");
    manifest.complete = false;
    write_manifest(dir, manifest);
    throw;
  }

  manifest.files.push_back("manifest.txt");
  manifest.complete = true;
  write_manifest(dir, manifest);
  return manifest;
}

std::string describe(const ExperimentConfig& config) {
  std::ostringstream out;
  const ChainParams& chain = config.chain;
  char line[256];

  out << "chain: gain = " << fmt(chain.gain) << " ("
      << fmt(10.0 * std::log10(chain.gain)) << " dB), T_N = "
      << fmt(chain.noise_temp_K) << " K, eta = (" << fmt(chain.eta_signal)
      << ", " << fmt(chain.eta_idler) << ")\n";
  std::snprintf(line, sizeof line,
                "n_sys: signal %.4f photons @ %.4g GHz, idler %.4f photons "
                "@ %.4g GHz\n",
                chain.n_sys_signal(), chain.f_signal_Hz / 1e9,
                chain.n_sys_idler(), chain.f_idler_Hz / 1e9);
  out << line;
  out << "rho = " << fmt(config.rho) << ", samples/point = " << config.samples
      << ", seed = " << config.seed << "\n\n";

  std::snprintf(line, sizeof line, "%12s %10s %12s %14s %12s\n", "n", "r",
                "nu_min_q", "nu_min_c", "E_Q(analytic)");
  out << line;
  for (const double n : config.photon_grid) {
    const double r = std::asinh(std::sqrt(n));
    // Source-side PPT eigenvalues; e^(-2r) for the TMS source.
    const double nu_q = std::exp(-2.0 * r);
    const double nu_c = 1.0 + 2.0 * n * (1.0 - config.rho);
    const double eq = n > 0.0 ? std::sqrt(1.0 + 1.0 / n) : 1.0;
    std::snprintf(line, sizeof line, "%12.6g %10.6g %12.6g %14.6g %12.6g\n",
                  n, r, nu_q, nu_c, eq);
    out << line;
  }
  return out.str();
}

std::vector<EnhancementPoint> read_enhancement_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open enhancement CSV: " + path);
  }
  std::vector<EnhancementPoint> points;
  std::string line;
  bool header_seen = false;
  int pd_col = -1, e_col = -1, se_col = -1, usable_col = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!header_seen) {
      header_seen = true;
      for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
        if (cells[static_cast<size_t>(i)] == "pd") pd_col = i;
        if (cells[static_cast<size_t>(i)] == "enhancement") e_col = i;
        if (cells[static_cast<size_t>(i)] == "enhancement_se") se_col = i;
        if (cells[static_cast<size_t>(i)] == "usable") usable_col = i;
      }
      if (pd_col < 0 || e_col < 0) {
        throw std::runtime_error(
            "enhancement CSV: missing pd/enhancement columns");
      }
      continue;
    }
    if (usable_col >= 0 && cells[static_cast<size_t>(usable_col)] == "0") {
      continue;
    }
    EnhancementPoint p;
    p.detected_power = std::stod(cells[static_cast<size_t>(pd_col)]);
    p.enhancement = std::stod(cells[static_cast<size_t>(e_col)]);
    if (se_col >= 0) p.sigma = std::stod(cells[static_cast<size_t>(se_col)]);
    points.push_back(p);
  }
  return points;
}

}  // namespace qenr
