#include "kvnlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kvnlab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail_at(const std::string& origin, int line, const std::string& what) {
  throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + what);
}

double to_double(const std::string& origin, int line, const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || std::isnan(out))
    fail_at(origin, line, key + " expects a number, got '" + value + "'");
  return out;
}

long long to_int(const std::string& origin, int line, const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long out = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    fail_at(origin, line, key + " expects an integer, got '" + value + "'");
  return out;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string kind_name(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::none: return "none";
    case PerturbationKind::quartic_stabilizer: return "quartic_stabilizer";
    case PerturbationKind::hidden_coupling: return "hidden_coupling";
  }
  throw std::invalid_argument("unknown perturbation kind");
}

PerturbationKind kind_from_name(const std::string& origin, int line, const std::string& name) {
  if (name == "none") return PerturbationKind::none;
  if (name == "quartic_stabilizer") return PerturbationKind::quartic_stabilizer;
  if (name == "hidden_coupling") return PerturbationKind::hidden_coupling;
  fail_at(origin, line, "perturbation.kind must be one of none, quartic_stabilizer, hidden_coupling; got '" +
                            name + "'");
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::gaussian: return "gaussian";
    case ExperimentKind::kvn: return "kvn";
    case ExperimentKind::doubled: return "doubled";
    case ExperimentKind::stabilizer: return "stabilizer";
    case ExperimentKind::deformation: return "deformation";
    case ExperimentKind::verify: return "verify";
  }
  throw std::invalid_argument("unknown experiment kind");
}

ExperimentKind experiment_from_name(const std::string& name) {
  for (auto kind : {ExperimentKind::gaussian, ExperimentKind::kvn, ExperimentKind::doubled,
                    ExperimentKind::stabilizer, ExperimentKind::deformation, ExperimentKind::verify})
    if (experiment_name(kind) == name) return kind;
  throw std::invalid_argument(
      "experiment must be one of gaussian, kvn, doubled, stabilizer, deformation, verify; got '" + name + "'");
}

double ExperimentConfig::period() const { return 2.0 * M_PI / omega; }

PhaseSpaceGrid ExperimentConfig::grid() const {
  PhaseSpaceGrid g;
  g.nq = nq;
  g.np = np;
  g.q_min = q_min;
  g.q_max = q_max;
  g.p_min = p_min;
  g.p_max = p_max;
  g.validate();
  return g;
}

PerturbationSpec ExperimentConfig::perturbation() const {
  PerturbationSpec spec;
  spec.kind = kind;
  spec.lambda = lambda;
  spec.epsilon = epsilon;
  return spec;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  bool dt_set = false, t_final_set = false;

  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string entry = trim(raw);
    if (entry.empty()) continue;

    if (entry.front() == '[') {
      if (entry.back() != ']') fail_at(origin, line, "malformed section header '" + entry + "'");
      section = trim(entry.substr(1, entry.size() - 2));
      if (section != "run" && section != "physics" && section != "grid" && section != "state" &&
          section != "perturbation" && section != "io")
        fail_at(origin, line, "unknown section [" + section + "]");
      continue;
    }

    const auto eq = entry.find('=');
    if (eq == std::string::npos) fail_at(origin, line, "expected 'key = value', got '" + entry + "'");
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key.empty()) fail_at(origin, line, "empty key");
    if (section.empty()) fail_at(origin, line, "key '" + key + "' appears before any section");
    const std::string path = section + "." + key;

    if (section == "run") {
      if (key == "experiment") {
        try {
          cfg.experiment = experiment_from_name(value);
        } catch (const std::invalid_argument& e) {
          fail_at(origin, line, e.what());
        }
      } else if (key == "dt") {
        cfg.dt = to_double(origin, line, path, value);
        if (cfg.dt <= 0.0) fail_at(origin, line, "run.dt must be positive");
        dt_set = true;
      } else if (key == "t_final") {
        cfg.t_final = to_double(origin, line, path, value);
        if (cfg.t_final < 0.0) fail_at(origin, line, "run.t_final must be nonnegative");
        t_final_set = true;
      } else if (key == "sample_stride") {
        const long long v = to_int(origin, line, path, value);
        if (v < 1) fail_at(origin, line, "run.sample_stride must be at least 1");
        cfg.sample_stride = static_cast<int>(v);
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(to_int(origin, line, path, value));
      } else if (key == "sigma_m") {
        cfg.sigma_m = to_double(origin, line, path, value);
        if (cfg.sigma_m <= 0.0) fail_at(origin, line, "run.sigma_m must be positive");
      } else {
        fail_at(origin, line, "unknown key " + path);
      }
    } else if (section == "physics") {
      if (key == "hbar") cfg.hbar = to_double(origin, line, path, value);
      else if (key == "m") cfg.m = to_double(origin, line, path, value);
      else if (key == "omega") cfg.omega = to_double(origin, line, path, value);
      else fail_at(origin, line, "unknown key " + path);
      if (cfg.hbar <= 0.0 || cfg.m <= 0.0 || cfg.omega <= 0.0)
        fail_at(origin, line, path + " must be positive");
    } else if (section == "grid") {
      if (key == "nq" || key == "np") {
        const long long v = to_int(origin, line, path, value);
        if (!power_of_two(static_cast<int>(v)) || v < 8)
          fail_at(origin, line, key + " must be a power of two >= 8, got " + value);
        (key == "nq" ? cfg.nq : cfg.np) = static_cast<int>(v);
      } else if (key == "q_min") cfg.q_min = to_double(origin, line, path, value);
      else if (key == "q_max") cfg.q_max = to_double(origin, line, path, value);
      else if (key == "p_min") cfg.p_min = to_double(origin, line, path, value);
      else if (key == "p_max") cfg.p_max = to_double(origin, line, path, value);
      else fail_at(origin, line, "unknown key " + path);
    } else if (section == "state") {
      if (key == "q_center") cfg.q_center = to_double(origin, line, path, value);
      else if (key == "p_center") cfg.p_center = to_double(origin, line, path, value);
      else if (key == "sigma_q") {
        cfg.sigma_q = to_double(origin, line, path, value);
        if (cfg.sigma_q <= 0.0) fail_at(origin, line, "state.sigma_q must be positive");
      } else if (key == "sigma_p") {
        cfg.sigma_p = to_double(origin, line, path, value);
        if (cfg.sigma_p <= 0.0) fail_at(origin, line, "state.sigma_p must be positive");
      } else if (key == "alpha1_re") cfg.alpha1_re = to_double(origin, line, path, value);
      else if (key == "alpha1_im") cfg.alpha1_im = to_double(origin, line, path, value);
      else if (key == "alpha2_re") cfg.alpha2_re = to_double(origin, line, path, value);
      else if (key == "alpha2_im") cfg.alpha2_im = to_double(origin, line, path, value);
      else if (key == "n_trunc") {
        const long long v = to_int(origin, line, path, value);
        if (v < 2) fail_at(origin, line, "state.n_trunc must be at least 2");
        cfg.n_trunc = static_cast<int>(v);
      } else fail_at(origin, line, "unknown key " + path);
    } else if (section == "perturbation") {
      if (key == "kind") cfg.kind = kind_from_name(origin, line, value);
      else if (key == "lambda") {
        cfg.lambda = to_double(origin, line, path, value);
        if (!(cfg.lambda > 0.0)) fail_at(origin, line, "perturbation.lambda must be positive or inf");
      } else if (key == "epsilon") {
        cfg.epsilon = to_double(origin, line, path, value);
        if (cfg.epsilon < 0.0) fail_at(origin, line, "perturbation.epsilon must be nonnegative");
      } else fail_at(origin, line, "unknown key " + path);
    } else if (section == "io") {
      if (key == "output_dir") {
        if (value.empty()) fail_at(origin, line, "io.output_dir must not be empty");
        cfg.output_dir = value;
      } else if (key == "formats") {
        cfg.formats.clear();
        std::istringstream list(value);
        std::string token;
        while (std::getline(list, token, ',')) {
          token = trim(token);
          if (token != "csv" && token != "json" && token != "binary")
            fail_at(origin, line, "io.formats entries must be csv, json or binary; got '" + token + "'");
          cfg.formats.push_back(token);
        }
        if (cfg.formats.empty()) fail_at(origin, line, "io.formats must list at least one format");
      } else fail_at(origin, line, "unknown key " + path);
    }
  }

  if (!dt_set) cfg.dt = cfg.period() / 2000.0;
  if (!t_final_set) cfg.t_final = cfg.period();
  if (cfg.q_min >= cfg.q_max) throw std::invalid_argument(origin + ": grid.q_min must be below grid.q_max");
  if (cfg.p_min >= cfg.p_max) throw std::invalid_argument(origin + ": grid.p_min must be below grid.p_max");
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[run]\n";
  out << "experiment = " << experiment_name(cfg.experiment) << "\n";
  out << "dt = " << format_double(cfg.dt) << "\n";
  out << "t_final = " << format_double(cfg.t_final) << "\n";
  out << "sample_stride = " << cfg.sample_stride << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "sigma_m = " << format_double(cfg.sigma_m) << "\n";
  out << "\n[physics]\n";
  out << "hbar = " << format_double(cfg.hbar) << "\n";
  out << "m = " << format_double(cfg.m) << "\n";
  out << "omega = " << format_double(cfg.omega) << "\n";
  out << "\n[grid]\n";
  out << "nq = " << cfg.nq << "\n";
  out << "np = " << cfg.np << "\n";
  out << "q_min = " << format_double(cfg.q_min) << "\n";
  out << "q_max = " << format_double(cfg.q_max) << "\n";
  out << "p_min = " << format_double(cfg.p_min) << "\n";
  out << "p_max = " << format_double(cfg.p_max) << "\n";
  out << "\n[state]\n";
  out << "q_center = " << format_double(cfg.q_center) << "\n";
  out << "p_center = " << format_double(cfg.p_center) << "\n";
  out << "sigma_q = " << format_double(cfg.sigma_q) << "\n";
  out << "sigma_p = " << format_double(cfg.sigma_p) << "\n";
  out << "alpha1_re = " << format_double(cfg.alpha1_re) << "\n";
  out << "alpha1_im = " << format_double(cfg.alpha1_im) << "\n";
  out << "alpha2_re = " << format_double(cfg.alpha2_re) << "\n";
  out << "alpha2_im = " << format_double(cfg.alpha2_im) << "\n";
  out << "n_trunc = " << cfg.n_trunc << "\n";
  out << "\n[perturbation]\n";
  out << "kind = " << kind_name(cfg.kind) << "\n";
  out << "lambda = " << format_double(cfg.lambda) << "\n";
  out << "epsilon = " << format_double(cfg.epsilon) << "\n";
  out << "\n[io]\n";
  out << "output_dir = " << cfg.output_dir << "\n";
  std::string joined;
  for (const auto& f : cfg.formats) {
    if (!joined.empty()) joined += ",";
    joined += f;
  }
  out << "formats = " << joined << "\n";
  return out.str();
}

std::string resolve_output_dir(const ExperimentConfig& cfg) {
  const char* root = std::getenv("KVNLAB_OUTPUT_ROOT");
  if (root && *root) return (std::filesystem::path(root) / cfg.output_dir).string();
  return cfg.output_dir;
}

}  // namespace kvnlab
