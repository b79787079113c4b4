#include "qenr/config.hpp"

#include "qenr/sources.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qenr {

namespace {

const std::set<std::string> kKnownSweeps = {"entanglement", "covariance",
                                            "enhancement", "roc"};

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("line " + std::to_string(line) + ": " + message);
}

std::map<std::string, Section> tokenize(const std::string& text) {
  std::map<std::string, Section> sections;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto comment = raw.find_first_of("#;");
    std::string s = trim(comment == std::string::npos
                             ? raw
                             : raw.substr(0, comment));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      current = trim(s.substr(1, s.size() - 2));
      if (current.empty()) fail(line, "empty section name");
      sections[current];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    if (current.empty()) fail(line, "key outside any [section]");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for '" + key + "'");
    auto [it, inserted] = sections[current].emplace(key, Entry{value, line});
    if (!inserted) fail(line, "duplicate key '" + key + "'");
  }
  return sections;
}

double parse_double(const Entry& e, const std::string& key) {
  try {
    size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(e.line, "'" + key + "': not a number: " + e.value);
  }
}

std::int64_t parse_int(const Entry& e, const std::string& key) {
  const double v = parse_double(e, key);
  if (v != std::floor(v) || std::abs(v) > 9e18) {
    fail(e.line, "'" + key + "': not an integer: " + e.value);
  }
  return static_cast<std::int64_t>(v);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// Grids accept either a comma list or logspace:<lo>:<hi>:<count>.
std::vector<double> parse_grid(const Entry& e, const std::string& key) {
  std::vector<double> grid;
  if (e.value.rfind("logspace:", 0) == 0) {
    std::vector<std::string> fields;
    std::istringstream in(e.value.substr(9));
    std::string f;
    while (std::getline(in, f, ':')) fields.push_back(trim(f));
    if (fields.size() != 3) {
      fail(e.line, "'" + key + "': expected logspace:<lo>:<hi>:<count>");
    }
    const double lo = parse_double(Entry{fields[0], e.line}, key);
    const double hi = parse_double(Entry{fields[1], e.line}, key);
    const std::int64_t count = parse_int(Entry{fields[2], e.line}, key);
    if (!(lo > 0.0) || !(hi > lo) || count < 2) {
      fail(e.line, "'" + key + "': need 0 < lo < hi and count >= 2");
    }
    for (std::int64_t i = 0; i < count; ++i) {
      const double f01 =
          static_cast<double>(i) / static_cast<double>(count - 1);
      grid.push_back(
          std::pow(10.0, std::log10(lo) + f01 * (std::log10(hi) - std::log10(lo))));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
  }
  for (const auto& item : split_list(e.value)) {
    grid.push_back(parse_double(Entry{item, e.line}, key));
  }
  if (grid.empty()) fail(e.line, "'" + key + "': empty list");
  return grid;
}

class SectionReader {
 public:
  SectionReader(Section* section, std::string name)
      : section_(section), name_(std::move(name)) {}

  bool has(const std::string& key) const {
    return section_ != nullptr && section_->count(key) > 0;
  }
  const Entry& at(const std::string& key) {
    used_.insert(key);
    return section_->at(key);
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? parse_double(at(key), key) : fallback;
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    return has(key) ? parse_int(at(key), key) : fallback;
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? at(key).value : fallback;
  }

  void finish() const {
    if (section_ == nullptr) return;
    for (const auto& [key, entry] : *section_) {
      if (used_.count(key) == 0) {
        fail(entry.line, "unknown key '" + key + "' in [" + name_ + "]");
      }
    }
  }

 private:
  Section* section_;
  std::string name_;
  std::set<std::string> used_;
};

void range_check(bool ok, const Entry& e, const std::string& message) {
  if (!ok) fail(e.line, message);
}

}  // namespace

bool ExperimentConfig::wants(const std::string& sweep) const {
  return std::find(sweeps.begin(), sweeps.end(), sweep) != sweeps.end();
}

ExperimentConfig parse_config(const std::string& text) {
  auto sections = tokenize(text);
  const std::set<std::string> known_sections = {"source", "chain", "receiver",
                                                "analysis", "output"};
  for (const auto& [name, content] : sections) {
    if (known_sections.count(name) == 0) {
      const int line = content.empty() ? 0 : content.begin()->second.line;
      fail(line, "unknown section [" + name + "]");
    }
  }

  ExperimentConfig cfg;
  const auto reader = [&sections](const char* name) {
    auto it = sections.find(name);
    return SectionReader(it == sections.end() ? nullptr : &it->second, name);
  };

  // [source]
  if (sections.count("source") == 0) {
    throw ConfigError("missing required section [source]");
  }
  {
    SectionReader src = reader("source");
    const std::string kind = src.text("kind", "both");
    if (kind == "quantum") {
      cfg.kind = SourceSelection::kQuantum;
    } else if (kind == "classical") {
      cfg.kind = SourceSelection::kClassical;
    } else if (kind == "both") {
      cfg.kind = SourceSelection::kBoth;
    } else {
      fail(src.at("kind").line,
           "'kind': expected quantum, classical, or both");
    }
    cfg.rho = src.number("rho", 0.99);
    if (src.has("rho")) {
      range_check(cfg.rho >= 0.0 && cfg.rho <= 1.0, src.at("rho"),
                  "'rho': must lie in [0, 1]");
    }
    cfg.kappa = src.number("kappa", 1.0);
    if (src.has("kappa")) {
      range_check(cfg.kappa > 0.0, src.at("kappa"), "'kappa': must be > 0");
    }
    const int grid_keys = (src.has("n") ? 1 : 0) + (src.has("n_grid") ? 1 : 0) +
                          (src.has("pump_grid") ? 1 : 0);
    if (grid_keys == 0) {
      throw ConfigError(
          "[source] must set one of: n, n_grid, pump_grid");
    }
    if (grid_keys > 1) {
      throw ConfigError(
          "[source] keys n, n_grid, pump_grid are mutually exclusive");
    }
    if (src.has("n")) {
      cfg.photon_grid = {parse_double(src.at("n"), "n")};
    } else if (src.has("n_grid")) {
      cfg.photon_grid = parse_grid(src.at("n_grid"), "n_grid");
    } else {
      const auto pump = parse_grid(src.at("pump_grid"), "pump_grid");
      for (const double p : pump) {
        cfg.photon_grid.push_back(pump_to_photons(p, cfg.kappa));
      }
    }
    const Entry& grid_entry = src.has("n")        ? src.at("n")
                              : src.has("n_grid") ? src.at("n_grid")
                                                  : src.at("pump_grid");
    for (size_t i = 0; i < cfg.photon_grid.size(); ++i) {
      range_check(std::isfinite(cfg.photon_grid[i]) && cfg.photon_grid[i] >= 0.0,
                  grid_entry, "photon numbers must be finite and >= 0");
      if (i > 0) {
        range_check(cfg.photon_grid[i] > cfg.photon_grid[i - 1], grid_entry,
                    "photon grid must be strictly ascending");
      }
    }
    src.finish();
  }

  // [chain]
  {
    SectionReader ch = reader("chain");
    const double gain_db = ch.number("gain_db", 61.1);
    if (ch.has("gain_db")) {
      range_check(gain_db >= 0.0, ch.at("gain_db"),
                  "'gain_db': must be >= 0 (linear gain >= 1)");
    }
    cfg.chain.gain = std::pow(10.0, gain_db / 10.0);
    cfg.chain.noise_temp_K = ch.number("noise_temp_K", 8.0);
    if (ch.has("noise_temp_K")) {
      range_check(std::isfinite(cfg.chain.noise_temp_K) &&
                      cfg.chain.noise_temp_K >= 0.0,
                  ch.at("noise_temp_K"), "'noise_temp_K': must be >= 0");
    }
    cfg.chain.f_signal_Hz = ch.number("f_signal_Hz", 4.5e9);
    if (ch.has("f_signal_Hz")) {
      range_check(cfg.chain.f_signal_Hz > 0.0, ch.at("f_signal_Hz"),
                  "'f_signal_Hz': must be > 0");
    }
    cfg.chain.f_idler_Hz = ch.number("f_idler_Hz", 6.5e9);
    if (ch.has("f_idler_Hz")) {
      range_check(cfg.chain.f_idler_Hz > 0.0, ch.at("f_idler_Hz"),
                  "'f_idler_Hz': must be > 0");
    }
    cfg.chain.eta_signal = ch.number("eta_signal", 1.0);
    if (ch.has("eta_signal")) {
      range_check(cfg.chain.eta_signal > 0.0 && cfg.chain.eta_signal <= 1.0,
                  ch.at("eta_signal"), "'eta_signal': must lie in (0, 1]");
    }
    cfg.chain.eta_idler = ch.number("eta_idler", 1.0);
    if (ch.has("eta_idler")) {
      range_check(cfg.chain.eta_idler > 0.0 && cfg.chain.eta_idler <= 1.0,
                  ch.at("eta_idler"), "'eta_idler': must lie in (0, 1]");
    }
    cfg.chain.env_temp_K = ch.number("env_temp_K", 0.0);
    if (ch.has("env_temp_K")) {
      range_check(std::isfinite(cfg.chain.env_temp_K) &&
                      cfg.chain.env_temp_K >= 0.0,
                  ch.at("env_temp_K"), "'env_temp_K': must be >= 0");
    }
    cfg.chain.validate();
    ch.finish();
  }

  // [receiver]
  if (sections.count("receiver") == 0) {
    throw ConfigError("missing required section [receiver]");
  }
  {
    SectionReader rx = reader("receiver");
    if (!rx.has("samples")) {
      throw ConfigError("[receiver] must set samples");
    }
    cfg.samples = parse_int(rx.at("samples"), "samples");
    range_check(cfg.samples >= 2, rx.at("samples"),
                "'samples': must be >= 2");
    cfg.roc_samples = rx.integer("roc_samples", 10000);
    if (rx.has("roc_samples")) {
      range_check(cfg.roc_samples >= 2, rx.at("roc_samples"),
                  "'roc_samples': must be >= 2");
    }
    cfg.trials = static_cast<int>(rx.integer("trials", 1000));
    if (rx.has("trials")) {
      range_check(cfg.trials >= 100, rx.at("trials"),
                  "'trials': must be >= 100");
    }
    const std::int64_t seed = rx.integer("seed", 1);
    range_check(seed >= 0, rx.has("seed") ? rx.at("seed") : Entry{"1", 0},
                "'seed': must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
    rx.finish();
  }

  // [analysis]
  {
    SectionReader an = reader("analysis");
    const std::string sweeps =
        an.text("sweeps", "entanglement,covariance,enhancement,roc");
    cfg.sweeps = split_list(sweeps);
    for (const auto& s : cfg.sweeps) {
      if (kKnownSweeps.count(s) == 0) {
        fail(an.has("sweeps") ? an.at("sweeps").line : 0,
             "unknown sweep '" + s + "'");
      }
    }
    if (cfg.sweeps.empty()) {
      fail(an.at("sweeps").line, "'sweeps': empty list");
    }
    if (an.has("pfa")) {
      cfg.pfa_grid = parse_grid(an.at("pfa"), "pfa");
      for (const double p : cfg.pfa_grid) {
        range_check(p > 0.0 && p < 1.0, an.at("pfa"),
                    "'pfa': values must lie in (0, 1)");
      }
    } else {
      cfg.pfa_grid = {0.01, 0.05, 0.1};
    }
    an.finish();
  }

  // [output]
  {
    SectionReader out = reader("output");
    cfg.directory = out.text("directory", "out");
    const std::string formats = out.text("formats", "csv");
    cfg.formats = split_list(formats);
    for (const auto& f : cfg.formats) {
      if (f != "csv") {
        fail(out.at("formats").line, "unknown format '" + f + "'");
      }
    }
    out.finish();
  }

  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out;
}

std::string join_numbers(const std::vector<double>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += fmt(items[i]);
  }
  return out;
}

}  // namespace

std::string canonicalize(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[source]\n";
  out << "kind = "
      << (cfg.kind == SourceSelection::kQuantum     ? "quantum"
          : cfg.kind == SourceSelection::kClassical ? "classical"
                                                    : "both")
      << "\n";
  out << "n_grid = " << join_numbers(cfg.photon_grid) << "\n";
  out << "rho = " << fmt(cfg.rho) << "\n";
  out << "kappa = " << fmt(cfg.kappa) << "\n";
  out << "[chain]\n";
  out << "gain_db = " << fmt(10.0 * std::log10(cfg.chain.gain)) << "\n";
  out << "noise_temp_K = " << fmt(cfg.chain.noise_temp_K) << "\n";
  out << "f_signal_Hz = " << fmt(cfg.chain.f_signal_Hz) << "\n";
  out << "f_idler_Hz = " << fmt(cfg.chain.f_idler_Hz) << "\n";
  out << "eta_signal = " << fmt(cfg.chain.eta_signal) << "\n";
  out << "eta_idler = " << fmt(cfg.chain.eta_idler) << "\n";
  out << "env_temp_K = " << fmt(cfg.chain.env_temp_K) << "\n";
  out << "[receiver]\n";
  out << "samples = " << cfg.samples << "\n";
  out << "roc_samples = " << cfg.roc_samples << "\n";
  out << "trials = " << cfg.trials << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "[analysis]\n";
  out << "sweeps = " << join(cfg.sweeps) << "\n";
  out << "pfa = " << join_numbers(cfg.pfa_grid) << "\n";
  out << "[output]\n";
  out << "directory = " << cfg.directory << "\n";
  out << "formats = " << (cfg.formats.empty() ? "csv" : join(cfg.formats))
      << "\n";
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonicalize(cfg);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

}  // namespace qenr
