#pragma once

// Discrete-time spiking network used to generate synthetic multi-neuron
// recordings. Every delta_t each neuron's rate is
//
//     lambda_j(k) = lambda_max / (1 + exp(-I_j(k) + d)),
//     I_j(k)      = sum_i O_i(k - delay_ij) * w_ij,
//
// where O_i(k) is 1 if neuron i spiked in step k. Background synapses are
// all-to-all with weights uniform on [-c, c] and delay h; strong edges replace
// the background synapse and carry their own delay. A non-refractory neuron
// spikes in a step with probability 1 - exp(-lambda * delta_t).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "episodes/errors.hpp"
#include "episodes/event.hpp"

namespace episodes {

struct StrongEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
  std::size_t delay_steps = 1;

  friend bool operator==(const StrongEdge&, const StrongEdge&) = default;
};

enum class RateMode {
  network,         // sigmoid of synaptic input
  uniform_random,  // lambda ~ U(0, random_rate_max) independently per neuron and step
};

struct NetworkConfig {
  std::size_t num_neurons = 26;
  /// Background weights are uniform on [-weight_bound, weight_bound].
  double weight_bound = 0.5;
  std::vector<StrongEdge> strong_edges;
  /// Spikes per second.
  double lambda_max = 5000.0;
  /// Rate offset; lambda_max / (1 + e^d) is the resting rate. ln(999) gives 5 Hz.
  double d = 6.906754778648554;
  /// Update step in seconds; also the tick of the generated sequence.
  double delta_t = 1e-3;
  /// Background synaptic delay in steps.
  std::size_t h = 5;
  std::size_t refractory_steps = 1;
  /// Seconds.
  double duration = 50.0;
  std::uint64_t seed = 1;
  /// Seed for the background weights; `seed` is used when unset.
  std::optional<std::uint64_t> weight_seed;
  /// Weight given to edges added by embed_pattern, split evenly over the inputs
  /// of a neuron fed by a group.
  double strong_weight = 9.0;
  RateMode rate_mode = RateMode::network;
  double random_rate_max = 10.0;

  [[nodiscard]] double resting_rate() const { return lambda_max / (1.0 + std::exp(d)); }

  [[nodiscard]] std::size_t steps() const {
    return static_cast<std::size_t>(std::llround(duration / delta_t));
  }

  void validate() const {
    if (num_neurons == 0) throw ConfigError("num_neurons must be positive");
    if (!(weight_bound >= 0.0)) throw ConfigError("weight_bound must be non-negative");
    if (!(lambda_max > 0.0)) throw ConfigError("lambda_max must be positive");
    if (!std::isfinite(d)) throw ConfigError("d must be finite");
    if (!(delta_t > 0.0)) throw ConfigError("delta_t must be positive");
    if (h == 0) throw ConfigError("h must be a positive number of steps");
    if (refractory_steps == 0) throw ConfigError("refractory_steps must be at least 1");
    if (!(duration > 0.0)) throw ConfigError("duration must be positive");
    if (!(random_rate_max >= 0.0)) throw ConfigError("random_rate_max must be non-negative");
    for (const auto& e : strong_edges) {
      if (e.from >= num_neurons || e.to >= num_neurons)
        throw ConfigError("strong edge refers to a neuron outside the network");
      if (e.delay_steps == 0) throw ConfigError("strong edge delay must be at least one step");
    }
  }

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct SpikeRun {
  EventSequence sequence;
  NetworkConfig config;
  std::size_t total_spikes = 0;
};

/// "A".."Z" for the first 26 neurons, then "N26", "N27", ...
inline std::string neuron_label(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "N" + std::to_string(i);
}

inline std::optional<std::size_t> neuron_index(std::string_view label, std::size_t num_neurons) {
  std::size_t idx = 0;
  if (label.size() == 1 && label[0] >= 'A' && label[0] <= 'Z') {
    idx = static_cast<std::size_t>(label[0] - 'A');
  } else {
    auto digits = label.starts_with("N") ? label.substr(1) : label;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
      return std::nullopt;
    idx = std::stoul(std::string(digits));
  }
  if (idx >= num_neurons) return std::nullopt;
  return idx;
}

inline double sigmoid_rate(double input, double lambda_max, double d) {
  return lambda_max / (1.0 + std::exp(-input + d));
}

/// Rate of every neuron for the given total inputs.
inline std::vector<double> update_rates(std::span<const double> inputs, const NetworkConfig& cfg) {
  std::vector<double> rates(inputs.size());
  for (std::size_t j = 0; j < inputs.size(); ++j) rates[j] = sigmoid_rate(inputs[j], cfg.lambda_max, cfg.d);
  return rates;
}

/// Background weight matrix, row = presynaptic neuron. Entries covered by a
/// strong edge and the diagonal are zero.
inline std::vector<std::vector<double>> background_weights(const NetworkConfig& cfg) {
  const auto n = cfg.num_neurons;
  std::seed_seq sseq{cfg.weight_seed.value_or(cfg.seed), std::uint64_t{0x77656967}};
  std::mt19937_64 rng(sseq);
  std::uniform_real_distribution<double> dist(-cfg.weight_bound, cfg.weight_bound);
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) w[i][j] = cfg.weight_bound > 0.0 ? dist(rng) : 0.0;
  for (const auto& e : cfg.strong_edges) w[e.from][e.to] = 0.0;
  return w;
}

inline SpikeRun simulate(const NetworkConfig& cfg) {
  cfg.validate();
  const auto n = cfg.num_neurons;
  const auto steps = cfg.steps();
  const auto weights = background_weights(cfg);

  std::size_t max_delay = cfg.h;
  for (const auto& e : cfg.strong_edges) max_delay = std::max(max_delay, e.delay_steps);
  const std::size_t ring_len = max_delay + 1;
  std::vector<std::vector<char>> fired(ring_len, std::vector<char>(n, 0));
  std::vector<std::vector<std::size_t>> fired_list(ring_len);

  std::seed_seq sseq{cfg.seed, std::uint64_t{0x6e6f6973}};
  std::mt19937_64 rng(sseq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Alphabet alpha;
  for (std::size_t j = 0; j < n; ++j) alpha.intern(neuron_label(j));
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(cfg.resting_rate() * cfg.duration * static_cast<double>(n) * 1.5));

  std::vector<double> input(n);
  std::vector<std::size_t> next_allowed(n, 0);
  for (std::size_t k = 0; k < steps; ++k) {
    std::fill(input.begin(), input.end(), 0.0);
    if (k >= cfg.h)
      for (auto i : fired_list[(k - cfg.h) % ring_len])
        for (std::size_t j = 0; j < n; ++j) input[j] += weights[i][j];
    for (const auto& e : cfg.strong_edges)
      if (k >= e.delay_steps && fired[(k - e.delay_steps) % ring_len][e.from]) input[e.to] += e.weight;

    auto& now = fired[k % ring_len];
    auto& now_list = fired_list[k % ring_len];
    std::fill(now.begin(), now.end(), 0);
    now_list.clear();

    for (std::size_t j = 0; j < n; ++j) {
      const double lambda = cfg.rate_mode == RateMode::network
                                ? sigmoid_rate(input[j], cfg.lambda_max, cfg.d)
                                : unit(rng) * cfg.random_rate_max;
      const double u = unit(rng);
      if (k < next_allowed[j]) continue;
      if (u < -std::expm1(-lambda * cfg.delta_t)) {
        now[j] = 1;
        now_list.push_back(j);
        next_allowed[j] = k + cfg.refractory_steps;
        events.push_back(Event{EventType{static_cast<std::uint32_t>(j)}, static_cast<Tick>(k)});
      }
    }
  }
  const auto total = events.size();
  return SpikeRun{EventSequence(std::move(alpha), std::move(events), cfg.delta_t), cfg, total};
}

// ---------------------------------------------------------------------------
// Embedded connectivity patterns.

namespace sim_detail {

struct NamedEdge {
  char from;
  char to;
  double delay_ms;
};

inline std::vector<NamedEdge> named_pattern_edges(std::string_view name) {
  if (name == "none") return {};
  if (name == "example1")  // A drives B; B drives C and E; C drives D; E drives F
    return {{'A', 'B', 5}, {'B', 'C', 5}, {'B', 'E', 5}, {'C', 'D', 5}, {'E', 'F', 5}};
  if (name == "example2") {  // A -> (B C D) -> E -> (F G H I) -> J -> (K L)
    std::vector<NamedEdge> e;
    for (char c : {'B', 'C', 'D'}) e.push_back({'A', c, 5}), e.push_back({c, 'E', 5});
    for (char c : {'F', 'G', 'H', 'I'}) e.push_back({'E', c, 5}), e.push_back({c, 'J', 5});
    for (char c : {'K', 'L'}) e.push_back({'J', c, 5});
    return e;
  }
  if (name == "example3") {  // X -> (A B C) -> D -> E -> F with mixed delays
    std::vector<NamedEdge> e;
    for (char c : {'A', 'B', 'C'}) e.push_back({'X', c, 5});
    for (char c : {'A', 'B', 'C'}) e.push_back({c, 'D', 3});
    e.push_back({'D', 'E', 7});
    e.push_back({'E', 'F', 3});
    return e;
  }
  throw ConfigError("unknown pattern '" + std::string(name) + "'");
}

inline std::size_t ms_to_steps(double ms, double delta_t) {
  const double steps = ms * 1e-3 / delta_t;
  const double r = std::round(steps);
  if (r < 1.0 || std::abs(steps - r) > 1e-9 * std::max(1.0, r))
    throw ConfigError("delay of " + std::to_string(ms) + " ms is not a whole number of steps");
  return static_cast<std::size_t>(r);
}

}  // namespace sim_detail

/// Returns `cfg` with its strong edges replaced by the named topology:
/// "none", "example1", "example2", "example3" or "chain-K".
inline NetworkConfig embed_pattern(NetworkConfig cfg, std::string_view pattern) {
  cfg.strong_edges.clear();
  if (pattern.starts_with("chain-")) {
    std::size_t k = 0;
    try {
      k = std::stoul(std::string(pattern.substr(6)));
    } catch (const std::exception&) {
      throw ConfigError("bad chain length in '" + std::string(pattern) + "'");
    }
    if (k < 2) throw ConfigError("chain pattern needs at least two neurons");
    if (k > cfg.num_neurons) throw ConfigError("chain longer than the network");
    for (std::size_t i = 0; i + 1 < k; ++i)
      cfg.strong_edges.push_back(StrongEdge{i, i + 1, cfg.strong_weight, cfg.h});
    return cfg;
  }
  const auto edges = sim_detail::named_pattern_edges(pattern);
  for (const auto& e : edges) {
    const auto from = static_cast<std::size_t>(e.from - 'A');
    const auto to = static_cast<std::size_t>(e.to - 'A');
    if (from >= cfg.num_neurons || to >= cfg.num_neurons)
      throw ConfigError("pattern '" + std::string(pattern) + "' needs more neurons");
    // a target fed by a group needs the whole group: its inputs share one strong weight
    const auto fan_in = std::count_if(edges.begin(), edges.end(), [&](const auto& x) { return x.to == e.to; });
    cfg.strong_edges.push_back(StrongEdge{from, to, cfg.strong_weight / static_cast<double>(fan_in),
                                          sim_detail::ms_to_steps(e.delay_ms, cfg.delta_t)});
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Config files: `key = value` lines, '#' comments,
// `edge = FROM,TO,WEIGHT,DELAY_MS` for strong edges.

namespace sim_detail {

inline std::string trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

inline double to_real(const std::string& v, std::size_t line) {
  std::istringstream is(v);
  is.imbue(std::locale::classic());
  double x = 0.0;
  if (!(is >> x) || !(is >> std::ws).eof()) throw ConfigError("expected a number, got '" + v + "'", line);
  return x;
}

inline std::uint64_t to_uint(const std::string& v, std::size_t line) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("expected a non-negative integer, got '" + v + "'", line);
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError("integer out of range: '" + v + "'", line);
  }
}

inline std::string real_str(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace sim_detail

inline NetworkConfig parse_network_config(std::istream& in, NetworkConfig cfg = {}) {
  using namespace sim_detail;
  struct PendingEdge {
    std::string from, to;
    double weight, delay_ms;
    std::size_t line;
  };
  std::vector<PendingEdge> edges;
  bool edges_given = false;
  std::optional<double> resting;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    auto s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    auto key = trim(s.substr(0, eq));
    auto val = trim(s.substr(eq + 1));
    if (key == "num_neurons") cfg.num_neurons = to_uint(val, line);
    else if (key == "weight_bound" || key == "c") cfg.weight_bound = to_real(val, line);
    else if (key == "lambda_max") cfg.lambda_max = to_real(val, line);
    else if (key == "d") cfg.d = to_real(val, line);
    else if (key == "resting_rate") resting = to_real(val, line);
    else if (key == "delta_t") cfg.delta_t = to_real(val, line);
    else if (key == "h") cfg.h = to_uint(val, line);
    else if (key == "refractory_steps") cfg.refractory_steps = to_uint(val, line);
    else if (key == "duration") cfg.duration = to_real(val, line);
    else if (key == "seed") cfg.seed = to_uint(val, line);
    else if (key == "weight_seed") cfg.weight_seed = to_uint(val, line);
    else if (key == "strong_weight") cfg.strong_weight = to_real(val, line);
    else if (key == "random_rate_max") cfg.random_rate_max = to_real(val, line);
    else if (key == "rate_mode") {
      if (val == "network") cfg.rate_mode = RateMode::network;
      else if (val == "uniform_random") cfg.rate_mode = RateMode::uniform_random;
      else throw ConfigError("rate_mode must be 'network' or 'uniform_random'", line);
    } else if (key == "edge") {
      std::vector<std::string> parts;
      std::stringstream ss(val);
      for (std::string p; std::getline(ss, p, ',');) parts.push_back(trim(p));
      if (parts.size() != 4) throw ConfigError("edge needs FROM,TO,WEIGHT,DELAY_MS", line);
      edges.push_back({parts[0], parts[1], to_real(parts[2], line), to_real(parts[3], line), line});
      edges_given = true;
    } else {
      throw ConfigError("unknown key '" + key + "'", line);
    }
  }
  if (resting) {
    if (!(*resting > 0.0 && *resting < cfg.lambda_max))
      throw ConfigError("resting_rate must lie in (0, lambda_max)");
    cfg.d = std::log(cfg.lambda_max / *resting - 1.0);
  }
  if (edges_given) {
    cfg.strong_edges.clear();
    for (const auto& e : edges) {
      auto from = neuron_index(e.from, cfg.num_neurons);
      auto to = neuron_index(e.to, cfg.num_neurons);
      if (!from || !to) throw ConfigError("edge refers to an unknown neuron", e.line);
      std::size_t delay = 0;
      try {
        delay = sim_detail::ms_to_steps(e.delay_ms, cfg.delta_t);
      } catch (const ConfigError& err) {
        throw ConfigError(err.what(), e.line);
      }
      cfg.strong_edges.push_back(StrongEdge{*from, *to, e.weight, delay});
    }
  }
  cfg.validate();
  return cfg;
}

inline NetworkConfig load_network_config(const std::string& path, NetworkConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return parse_network_config(in, std::move(base));
}

/// Writes `cfg` in the format read by parse_network_config.
inline std::string to_config_text(const NetworkConfig& cfg) {
  using sim_detail::real_str;
  std::ostringstream os;
  os << "num_neurons = " << cfg.num_neurons << '\n'
     << "weight_bound = " << real_str(cfg.weight_bound) << '\n'
     << "lambda_max = " << real_str(cfg.lambda_max) << '\n'
     << "d = " << real_str(cfg.d) << '\n'
     << "delta_t = " << real_str(cfg.delta_t) << '\n'
     << "h = " << cfg.h << '\n'
     << "refractory_steps = " << cfg.refractory_steps << '\n'
     << "duration = " << real_str(cfg.duration) << '\n'
     << "seed = " << cfg.seed << '\n';
  if (cfg.weight_seed) os << "weight_seed = " << *cfg.weight_seed << '\n';
  os << "strong_weight = " << real_str(cfg.strong_weight) << '\n'
     << "rate_mode = " << (cfg.rate_mode == RateMode::network ? "network" : "uniform_random") << '\n'
     << "random_rate_max = " << real_str(cfg.random_rate_max) << '\n';
  for (const auto& e : cfg.strong_edges)
    os << "edge = " << neuron_label(e.from) << ',' << neuron_label(e.to) << ',' << real_str(e.weight)
       << ',' << real_str(static_cast<double>(e.delay_steps) * cfg.delta_t * 1e3) << '\n';
  return os.str();
}

}  // namespace episodes
