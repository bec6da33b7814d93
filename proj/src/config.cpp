#include "prethermo/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "prethermo/errors.hpp"

namespace prethermo {

const char* const kArtifactVersion = "prethermo 1.0.0";

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_key_value_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> problems;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back(fmt::format("line {}: expected key = value", lineno));
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      problems.push_back(fmt::format("line {}: empty key", lineno));
    else
      out[key] = val;
  }
  if (!problems.empty())
    throw ConfigError(fmt::format("config parse failed: {}", fmt::join(problems, "; ")));
  return out;
}

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_value_text(buf.str());
}

namespace {

struct Applier {
  const std::map<std::string, std::string>& values;
  std::vector<std::string> problems;
  std::vector<std::string> seen;

  const std::string* get(const std::string& key) {
    seen.push_back(key);
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  }

  void str(const std::string& key, std::string& field) {
    if (const std::string* v = get(key)) field = *v;
  }
  void num(const std::string& key, double& field) {
    if (const std::string* v = get(key)) {
      try {
        std::size_t used = 0;
        field = std::stod(*v, &used);
        if (used != v->size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        problems.push_back(fmt::format("{}: '{}' is not a number", key, *v));
      }
    }
  }
  template <typename T>
  void integer(const std::string& key, T& field) {
    if (const std::string* v = get(key)) {
      T parsed{};
      auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), parsed);
      if (ec != std::errc{} || ptr != v->data() + v->size())
        problems.push_back(fmt::format("{}: '{}' is not an integer", key, *v));
      else
        field = parsed;
    }
  }
  void flag(const std::string& key, bool& field) {
    if (const std::string* v = get(key)) {
      if (*v == "true" || *v == "1")
        field = true;
      else if (*v == "false" || *v == "0")
        field = false;
      else
        problems.push_back(fmt::format("{}: '{}' is not a boolean", key, *v));
    }
  }
  void int_list(const std::string& key, std::vector<long long>& field) {
    if (const std::string* v = get(key)) {
      std::vector<long long> parsed;
      std::istringstream in(*v);
      std::string item;
      bool ok = true;
      while (std::getline(in, item, ',')) {
        try {
          std::size_t used = 0;
          parsed.push_back(std::stoll(item, &used));
          if (used != item.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
          ok = false;
        }
      }
      if (!ok || parsed.empty())
        problems.push_back(fmt::format("{}: '{}' is not a comma-separated integer list", key, *v));
      else
        field = parsed;
    }
  }
};

}  // namespace

void apply_config(ExperimentConfig& cfg, const std::map<std::string, std::string>& values) {
  Applier ap{values, {}, {}};
  ap.str("experiment", cfg.experiment);
  ap.str("probe", cfg.probe);
  ap.num("nu", cfg.nu);
  ap.num("delta", cfg.delta);
  ap.num("gamma", cfg.gamma);
  ap.num("beta", cfg.beta);
  ap.num("beta_ambient", cfg.beta_ambient);
  ap.str("init", cfg.init);
  ap.num("p2", cfg.p2);
  ap.num("p3", cfg.p3);
  ap.num("a", cfg.a);
  ap.num("b", cfg.b);
  ap.num("sigma0R", cfg.sigma0R);
  ap.num("t_start", cfg.t_start);
  ap.num("t_stop", cfg.t_stop);
  ap.integer("t_points", cfg.t_points);
  ap.num("beta_start", cfg.beta_start);
  ap.num("beta_stop", cfg.beta_stop);
  ap.integer("beta_points", cfg.beta_points);
  ap.int_list("n_list", cfg.n_list);
  ap.num("spread", cfg.spread);
  ap.str("variant", cfg.variant);
  ap.num("cluster_tol", cfg.cluster_tol);
  ap.num("fd_step", cfg.fd_step);
  ap.integer("samples", cfg.samples);
  ap.integer("seed", cfg.seed);
  ap.flag("grid_mode", cfg.grid_mode);
  ap.integer("grid_bins", cfg.grid_bins);
  ap.str("out_dir", cfg.out_dir);
  ap.flag("plots", cfg.plots);
  ap.integer("threads", cfg.threads);
  ap.num("gap_threshold", cfg.gap_threshold);

  for (const auto& [key, value] : values) {
    (void)value;
    bool known = false;
    for (const auto& s : ap.seen)
      if (s == key) known = true;
    if (!known) ap.problems.push_back(fmt::format("unknown key '{}'", key));
  }
  if (!ap.problems.empty())
    throw ConfigError(fmt::format("config errors: {}", fmt::join(ap.problems, "; ")));
}

void validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> problems;
  auto require = [&](bool ok, std::string msg) {
    if (!ok) problems.push_back(std::move(msg));
  };
  require(cfg.experiment == "dynamics" || cfg.experiment == "fisher-sweep" ||
              cfg.experiment == "nlevel" || cfg.experiment == "xi-bound" ||
              cfg.experiment == "spectrum",
          fmt::format("experiment '{}' is not one of dynamics, fisher-sweep, nlevel,"
                      " xi-bound, spectrum", cfg.experiment));
  require(cfg.probe == "v" || cfg.probe == "qubit",
          fmt::format("probe '{}' is not v or qubit", cfg.probe));
  require(cfg.nu > 0.0, "nu must be positive");
  require(cfg.gamma > 0.0, "gamma must be positive");
  require(cfg.beta > 0.0, "beta must be positive");
  require(cfg.beta_ambient > 0.0, "beta_ambient must be positive");
  require(cfg.delta >= 0.0, "delta must be nonnegative");
  require(!(cfg.nu > 0.0) || cfg.delta < 1e-2 * cfg.nu,
          fmt::format("delta/nu = {} is outside the perturbative regime (< 1e-2)",
                      cfg.nu > 0.0 ? cfg.delta / cfg.nu : 0.0));
  require(cfg.init == "ground" || cfg.init == "mixed" || cfg.init == "ambient" ||
              cfg.init == "custom" || cfg.init == "all",
          fmt::format("init '{}' is not one of ground, mixed, ambient, custom, all",
                      cfg.init));
  require(cfg.t_points >= 1, "t_points must be at least 1");
  require(cfg.t_start > 0.0 && cfg.t_stop > cfg.t_start,
          "time grid needs 0 < t_start < t_stop");
  require(cfg.beta_points >= 1, "beta_points must be at least 1");
  require(cfg.beta_start > 0.0 && cfg.beta_stop >= cfg.beta_start,
          "beta grid needs 0 < beta_start <= beta_stop");
  require(!cfg.n_list.empty(), "n_list must be nonempty");
  for (long long n : cfg.n_list)
    require(n >= 1 && n <= 25,
            fmt::format("N = {} outside [1, 25] (Liouvillian dimension {})", n,
                        (n + 1) * (n + 1)));
  require(cfg.spread >= 0.0, "spread must be nonnegative");
  require(cfg.variant == "unified" || cfg.variant == "full_secular" ||
              cfg.variant == "nonsecular",
          fmt::format("variant '{}' is not one of unified, full_secular, nonsecular",
                      cfg.variant));
  require(cfg.cluster_tol >= 0.0, "cluster_tol must be nonnegative");
  require(cfg.fd_step >= 0.0, "fd_step must be nonnegative");
  require(cfg.samples >= 1, "samples must be at least 1");
  require(!cfg.grid_mode || cfg.grid_bins >= 1, "grid_bins must be at least 1");
  require(cfg.threads >= 1, "threads must be at least 1");
  require(cfg.gap_threshold > 1.0, "gap_threshold must exceed 1");
  require(!cfg.out_dir.empty(), "out_dir must be set");
  if (!problems.empty())
    throw ConfigError(fmt::format("config errors: {}", fmt::join(problems, "; ")));
}

std::string manifest_text(const ExperimentConfig& cfg,
                          const std::vector<std::string>& outputs) {
  std::string s;
  s += fmt::format("# {}\n", kArtifactVersion);
  for (const auto& f : outputs) s += fmt::format("# output: {}\n", f);
  s += fmt::format("experiment = {}\n", cfg.experiment);
  s += fmt::format("probe = {}\n", cfg.probe);
  s += fmt::format("nu = {}\n", cfg.nu);
  s += fmt::format("delta = {}\n", cfg.delta);
  s += fmt::format("gamma = {}\n", cfg.gamma);
  s += fmt::format("beta = {}\n", cfg.beta);
  s += fmt::format("beta_ambient = {}\n", cfg.beta_ambient);
  s += fmt::format("init = {}\n", cfg.init);
  s += fmt::format("p2 = {}\n", cfg.p2);
  s += fmt::format("p3 = {}\n", cfg.p3);
  s += fmt::format("a = {}\n", cfg.a);
  s += fmt::format("b = {}\n", cfg.b);
  s += fmt::format("sigma0R = {}\n", cfg.sigma0R);
  s += fmt::format("t_start = {}\n", cfg.t_start);
  s += fmt::format("t_stop = {}\n", cfg.t_stop);
  s += fmt::format("t_points = {}\n", cfg.t_points);
  s += fmt::format("beta_start = {}\n", cfg.beta_start);
  s += fmt::format("beta_stop = {}\n", cfg.beta_stop);
  s += fmt::format("beta_points = {}\n", cfg.beta_points);
  s += fmt::format("n_list = {}\n", fmt::join(cfg.n_list, ","));
  s += fmt::format("spread = {}\n", cfg.spread);
  s += fmt::format("variant = {}\n", cfg.variant);
  s += fmt::format("cluster_tol = {}\n", cfg.cluster_tol);
  s += fmt::format("fd_step = {}\n", cfg.fd_step);
  s += fmt::format("samples = {}\n", cfg.samples);
  s += fmt::format("seed = {}\n", cfg.seed);
  s += fmt::format("grid_mode = {}\n", cfg.grid_mode ? "true" : "false");
  s += fmt::format("grid_bins = {}\n", cfg.grid_bins);
  s += fmt::format("out_dir = {}\n", cfg.out_dir);
  s += fmt::format("plots = {}\n", cfg.plots ? "true" : "false");
  s += fmt::format("threads = {}\n", cfg.threads);
  s += fmt::format("gap_threshold = {}\n", cfg.gap_threshold);
  return s;
}

void write_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& outputs) {
  std::filesystem::create_directories(cfg.out_dir);
  std::string path = cfg.out_dir + "/manifest.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write manifest '{}'", path));
  out << manifest_text(cfg, outputs);
}

}  // namespace prethermo
