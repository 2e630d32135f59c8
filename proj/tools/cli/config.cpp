#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace fcsd::cli {

namespace {

using Kind = ConfigError::Kind;

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const char* expected) {
  throw ConfigError(Kind::Syntax, key,
                    key + ": expected " + expected + ", got '" + std::string(value) + "'");
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    bad_value(key, v, "a number");
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, std::string_view v) {
  Int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad_value(key, v, "true or false");
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = v.find(',');
    items.push_back(trim(v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return items;
}

std::vector<double> to_doubles(const std::string& key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;  // empty for input-only aliases
};

#define FCSD_REAL(name, member)                                                          \
  Field {                                                                                \
    name, [](RunConfig& c, const std::string& k, std::string_view v) {                   \
      c.member = to_double(k, v);                                                        \
    },                                                                                   \
        [](const RunConfig& c) { return fmt(c.member); }                                 \
  }
#define FCSD_INT(name, member, type)                                                     \
  Field {                                                                                \
    name, [](RunConfig& c, const std::string& k, std::string_view v) {                   \
      c.member = to_int<type>(k, v);                                                     \
    },                                                                                   \
        [](const RunConfig& c) { return std::to_string(c.member); }                      \
  }
#define FCSD_BOOL(name, member)                                                          \
  Field {                                                                                \
    name, [](RunConfig& c, const std::string& k, std::string_view v) {                   \
      c.member = to_bool(k, v);                                                          \
    },                                                                                   \
        [](const RunConfig& c) { return fmt_bool(c.member); }                            \
  }
#define FCSD_LIST(name, member)                                                          \
  Field {                                                                                \
    name, [](RunConfig& c, const std::string& k, std::string_view v) {                   \
      c.member = to_doubles(k, v);                                                       \
    },                                                                                   \
        [](const RunConfig& c) { return fmt(c.member); }                                 \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(Field{"experiment",
                      [](RunConfig& c, const std::string&, std::string_view v) {
                        c.experiment = parse_experiment(v);
                      },
                      [](const RunConfig& c) { return std::string(experiment_name(c.experiment)); }});
    f.push_back(FCSD_INT("seed", seed, std::uint64_t));
    f.push_back(FCSD_INT("trials", trials, int));
    f.push_back(FCSD_INT("threads", threads, int));
    f.push_back(Field{"out_dir",
                      [](RunConfig& c, const std::string&, std::string_view v) {
                        c.out_dir = std::string(v);
                      },
                      [](const RunConfig& c) { return c.out_dir; }});
    f.push_back(FCSD_BOOL("trace", trace));

    // task
    f.push_back(Field{"data_size_mb",
                      [](RunConfig& c, const std::string& k, std::string_view v) {
                        c.task.data_size_bits = to_double(k, v) * kBitsPerMegabyte;
                      },
                      [](const RunConfig& c) {
                        return fmt(c.task.data_size_bits / kBitsPerMegabyte);
                      }});
    f.push_back(FCSD_REAL("complexity", task.complexity));
    f.push_back(FCSD_REAL("latency_bound_s", task.latency_bound_s));
    f.push_back(FCSD_REAL("reliability_bound", task.reliability_bound));

    // scenario distribution
    f.push_back(FCSD_INT("p", dist.p, int));
    f.push_back(FCSD_REAL("freq_min_hz", dist.freq_hz.low));
    f.push_back(FCSD_REAL("freq_max_hz", dist.freq_hz.high));
    f.push_back(FCSD_REAL("fail_min", dist.fail_rate.low));
    f.push_back(FCSD_REAL("fail_max", dist.fail_rate.high));
    f.push_back(FCSD_REAL("link_fail_min", dist.link_fail_rate.low));
    f.push_back(FCSD_REAL("link_fail_max", dist.link_fail_rate.high));
    f.push_back(FCSD_REAL("placement_cube_m", dist.placement_cube_m));
    f.push_back(FCSD_BOOL("rayleigh_fading", dist.rayleigh_fading));

    // channel and power
    f.push_back(FCSD_REAL("bandwidth_hz", dist.channel.bandwidth_hz));
    f.push_back(FCSD_REAL("tx_power_w", dist.channel.tx_power_w));
    f.push_back(FCSD_REAL("rx_power_w", dist.channel.rx_power_w));
    f.push_back(FCSD_REAL("noise_w", dist.channel.noise_w));
    f.push_back(Field{"noise_dbm",
                      [](RunConfig& c, const std::string& k, std::string_view v) {
                        c.dist.channel.noise_w = dbm_to_watts(to_double(k, v));
                      },
                      {}});
    f.push_back(FCSD_REAL("path_loss_exp", dist.channel.path_loss_exp));
    f.push_back(FCSD_REAL("overhead_ratio", dist.channel.overhead_ratio));
    f.push_back(FCSD_REAL("max_radius_m", dist.channel.max_radius_m));
    f.push_back(FCSD_REAL("kappa", dist.cpu_power.kappa));
    f.push_back(FCSD_REAL("cpu_exponent", dist.cpu_power.exponent));

    // cloud
    f.push_back(FCSD_BOOL("cloud", cloud));
    f.push_back(FCSD_REAL("cloud_x_m", cloud_spec.position.x));
    f.push_back(FCSD_REAL("cloud_y_m", cloud_spec.position.y));
    f.push_back(FCSD_REAL("cloud_z_m", cloud_spec.position.z));
    f.push_back(FCSD_REAL("cloud_freq_hz", cloud_spec.cpu_freq_hz));
    f.push_back(FCSD_REAL("cloud_bandwidth_hz", cloud_spec.bandwidth_hz));
    f.push_back(FCSD_REAL("cloud_fail_rate", cloud_spec.fail_rate));
    f.push_back(FCSD_REAL("cloud_link_fail_rate", cloud_spec.link_fail_rate));

    // GA
    f.push_back(FCSD_INT("generations", ga.generations, int));
    f.push_back(FCSD_INT("pop_size", ga.pop_size, int));
    f.push_back(FCSD_REAL("crossover_prob", ga.crossover_prob));
    f.push_back(FCSD_REAL("mutation_prob", ga.mutation_prob));
    f.push_back(FCSD_REAL("mutation_shape", ga.mutation_shape));
    f.push_back(Field{"mutation_exponent",
                      [](RunConfig& c, const std::string& k, std::string_view v) {
                        if (v == "product") {
                          c.ga.mutation_exponent = MutationExponent::Product;
                        } else if (v == "power") {
                          c.ga.mutation_exponent = MutationExponent::Power;
                        } else {
                          bad_value(k, v, "product or power");
                        }
                      },
                      [](const RunConfig& c) {
                        return std::string(c.ga.mutation_exponent == MutationExponent::Product
                                               ? "product"
                                               : "power");
                      }});
    f.push_back(FCSD_REAL("worst_init", ga.worst_init));
    f.push_back(FCSD_REAL("penalty_base", ga.penalty.base));
    f.push_back(FCSD_REAL("penalty_cap", ga.penalty_cap));
    f.push_back(FCSD_INT("elite_count", ga.elite_count, int));
    f.push_back(FCSD_BOOL("repair", ga.repair));
    f.push_back(FCSD_INT("chunks", chunks, int));

    // sweeps
    f.push_back(FCSD_LIST("d0_sweep_mb", d0_sweep_mb));
    f.push_back(FCSD_LIST("t0_sweep_s", t0_sweep_s));
    f.push_back(FCSD_LIST("r0_sweep", r0_sweep));
    f.push_back(Field{"algorithms",
                      [](RunConfig& c, const std::string& k, std::string_view v) {
                        c.algorithms.clear();
                        for (auto item : split_list(v)) {
                          try {
                            c.algorithms.push_back(parse_algorithm(item));
                          } catch (const std::invalid_argument&) {
                            bad_value(k, item, "lrga|random|wrr|maxmin|minmin");
                          }
                        }
                      },
                      [](const RunConfig& c) {
                        std::string out;
                        for (std::size_t i = 0; i < c.algorithms.size(); ++i) {
                          if (i) out += ", ";
                          out += algorithm_name(c.algorithms[i]);
                        }
                        return out;
                      }});
    return f;
  }();
  return table;
}

#undef FCSD_REAL
#undef FCSD_INT
#undef FCSD_BOOL
#undef FCSD_LIST

const Field* find_field(std::string_view key) {
  for (const Field& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ConfigError(Kind::Range, key, message);
}

bool positive(double v) { return v > 0.0; }

}  // namespace

ConfigError::ConfigError(Kind kind, std::string key, const std::string& message)
    : std::runtime_error(message), kind_(kind), key_(std::move(key)) {}

std::string_view experiment_name(Experiment e) noexcept {
  switch (e) {
    case Experiment::Latency: return "latency";
    case Experiment::Reliability: return "reliability";
    case Experiment::EnergySurface: return "energy-surface";
    case Experiment::EnergyCompare: return "energy-compare";
    case Experiment::SolveOne: return "solve-one";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (Experiment e : {Experiment::Latency, Experiment::Reliability, Experiment::EnergySurface,
                       Experiment::EnergyCompare, Experiment::SolveOne}) {
    if (experiment_name(e) == name) return e;
  }
  throw ConfigError(Kind::Range, "experiment",
                    "experiment must be one of latency|reliability|energy-surface|"
                    "energy-compare|solve-one, got '" + std::string(name) + "'");
}

ExperimentOptions RunConfig::experiment_options() const {
  ExperimentOptions o;
  o.trials = trials;
  o.threads = threads;
  o.ga = ga;
  o.chunks = chunks;
  return o;
}

ScenarioDistribution RunConfig::seeded_distribution() const {
  ScenarioDistribution d = dist;
  d.rng_seed = seed;
  if (cloud) {
    d.cloud = cloud_spec;
  } else {
    d.cloud.reset();
  }
  return d;
}

RunConfig parse_config_text(std::string_view text, std::string_view origin) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(Kind::Syntax, "",
                        where + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(Kind::Syntax, "", where + ": missing key before '='");
    const Field* field = find_field(key);
    if (!field) throw ConfigError(Kind::UnknownKey, key, where + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(Kind::Syntax, key, where + ": " + key + " has no value");
    if (!seen.insert(key).second) {
      throw ConfigError(Kind::Syntax, key, where + ": duplicate key '" + key + "'");
    }
    if (seen.count("noise_w") && seen.count("noise_dbm")) {
      throw ConfigError(Kind::Syntax, key, where + ": noise_w and noise_dbm are both set");
    }
    try {
      field->set(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(e.kind(), e.key(), where + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(Kind::MissingFile, "", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void validate(const RunConfig& c) {
  require(c.trials >= 1, "trials", "trials must be >= 1");
  require(c.threads >= 0, "threads", "threads must be >= 0");
  require(!c.out_dir.empty(), "out_dir", "out_dir must not be empty");

  require(positive(c.task.data_size_bits), "data_size_mb", "data_size_mb must be > 0");
  require(positive(c.task.complexity), "complexity", "complexity must be > 0");
  require(positive(c.task.latency_bound_s), "latency_bound_s", "latency_bound_s must be > 0");
  require(c.task.reliability_bound > 0.0 && c.task.reliability_bound <= 1.0,
          "reliability_bound", "reliability_bound must be in (0,1]");

  const ScenarioDistribution& d = c.dist;
  const bool solo = c.experiment == Experiment::SolveOne;
  require(d.p >= (solo ? 0 : 1), "p",
          solo ? "p must be >= 0" : "p must be >= 1 for this experiment");
  require(positive(d.freq_hz.low), "freq_min_hz", "freq_min_hz must be > 0");
  require(d.freq_hz.high >= d.freq_hz.low, "freq_max_hz", "freq_max_hz must be >= freq_min_hz");
  require(d.fail_rate.low >= 0.0, "fail_min", "fail_min must be >= 0");
  require(d.fail_rate.high >= d.fail_rate.low, "fail_max", "fail_max must be >= fail_min");
  require(d.link_fail_rate.low >= 0.0, "link_fail_min", "link_fail_min must be >= 0");
  require(d.link_fail_rate.high >= d.link_fail_rate.low, "link_fail_max",
          "link_fail_max must be >= link_fail_min");
  require(positive(d.placement_cube_m), "placement_cube_m", "placement_cube_m must be > 0");

  const ChannelModel& ch = d.channel;
  require(positive(ch.bandwidth_hz), "bandwidth_hz", "bandwidth_hz must be > 0");
  require(positive(ch.tx_power_w), "tx_power_w", "tx_power_w must be > 0");
  require(positive(ch.rx_power_w), "rx_power_w", "rx_power_w must be > 0");
  require(positive(ch.noise_w) && std::isfinite(ch.noise_w), "noise_w", "noise_w must be > 0");
  require(ch.path_loss_exp >= 2.0 && ch.path_loss_exp <= 5.0, "path_loss_exp",
          "path_loss_exp must be in [2,5]");
  require(ch.overhead_ratio >= 1.0, "overhead_ratio", "overhead_ratio must be >= 1");
  require(positive(ch.max_radius_m), "max_radius_m", "max_radius_m must be > 0");
  require(positive(d.cpu_power.kappa), "kappa", "kappa must be > 0");
  require(d.cpu_power.exponent >= 1.0, "cpu_exponent", "cpu_exponent must be >= 1");

  const CloudSpec& cs = c.cloud_spec;
  require(positive(cs.cpu_freq_hz), "cloud_freq_hz", "cloud_freq_hz must be > 0");
  require(positive(cs.bandwidth_hz), "cloud_bandwidth_hz", "cloud_bandwidth_hz must be > 0");
  require(cs.fail_rate >= 0.0, "cloud_fail_rate", "cloud_fail_rate must be >= 0");
  require(cs.link_fail_rate >= 0.0, "cloud_link_fail_rate", "cloud_link_fail_rate must be >= 0");
  require(c.cloud || c.experiment != Experiment::Latency, "cloud",
          "the latency experiment needs cloud = true");

  const GaConfig& ga = c.ga;
  require(ga.generations >= 1, "generations", "generations must be >= 1");
  require(ga.pop_size >= 2, "pop_size", "pop_size must be >= 2");
  require(ga.crossover_prob >= 0.0 && ga.crossover_prob <= 1.0, "crossover_prob",
          "crossover_prob must be in [0,1]");
  require(ga.mutation_prob >= 0.0 && ga.mutation_prob <= 1.0, "mutation_prob",
          "mutation_prob must be in [0,1]");
  require(ga.mutation_shape >= 2.0 && ga.mutation_shape <= 5.0, "mutation_shape",
          "mutation_shape must be in [2,5]");
  require(positive(ga.worst_init), "worst_init", "worst_init must be > 0");
  require(positive(ga.penalty.base), "penalty_base", "penalty_base must be > 0");
  require(positive(ga.penalty_cap), "penalty_cap", "penalty_cap must be > 0");
  require(ga.elite_count >= 1 && ga.elite_count < ga.pop_size, "elite_count",
          "elite_count must be in [1, pop_size)");
  require(c.chunks >= std::max(1, d.p), "chunks", "chunks must be >= max(1, p)");

  auto check_list = [](const std::vector<double>& v, const char* key, bool (*ok)(double),
                       const char* rule) {
    require(!v.empty(), key, std::string(key) + " must not be empty");
    for (double x : v) require(ok(x), key, std::string(key) + " entries must be " + rule);
  };
  check_list(c.d0_sweep_mb, "d0_sweep_mb", positive, "> 0");
  check_list(c.t0_sweep_s, "t0_sweep_s", positive, "> 0");
  check_list(c.r0_sweep, "r0_sweep", [](double r) { return r > 0.0 && r <= 1.0; }, "in (0,1]");
  require(!c.algorithms.empty(), "algorithms", "algorithms must not be empty");
}

std::string serialize(const RunConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) {
    if (!f.get) continue;
    out += f.key;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

}  // namespace fcsd::cli
