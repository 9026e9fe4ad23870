#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "episodes/episodes.hpp"

using namespace episodes;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kConfig = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for hashing");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

// Flat `key = value` file written next to every output.
class Manifest {
 public:
  explicit Manifest(std::string command) { add("command", std::move(command)); }

  void add(const std::string& k, const std::string& v) { lines_.emplace_back(k, v); }
  void add(const std::string& k, double v) { add(k, csv_detail::format_double(v)); }

  void artifact(const std::string& k, const std::string& path) {
    add(k, path);
    add(k + "_sha256", sha256_file(path));
  }

  void config(const NetworkConfig& cfg) {
    std::istringstream in(to_config_text(cfg));
    for (std::string line; std::getline(in, line);) {
      auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      add("config." + line.substr(0, eq), line.substr(eq + 3));
    }
  }

  void write(const std::string& path) const {
    std::ostringstream os;
    for (const auto& [k, v] : lines_) os << k << " = " << v << '\n';
    write_text(path, os.str());
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string joined_argv(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
  std::string config;
  std::string pattern;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string out;
};

int run_simulate(const SimulateOpts& o, const std::string& argv) {
  auto cfg = o.config.empty() ? NetworkConfig{} : load_network_config(o.config);
  if (!o.pattern.empty()) cfg = embed_pattern(cfg, o.pattern);
  if (o.seed) cfg.seed = *o.seed;
  if (o.duration) cfg.duration = *o.duration;
  cfg.validate();

  const auto t0 = std::chrono::steady_clock::now();
  const auto run = simulate(cfg);
  const double t_sim = since(t0);
  write_spike_file(run.sequence, o.out);

  Manifest m("simulate");
  m.add("argv", argv);
  if (!o.config.empty()) m.artifact("config_file", o.config);
  m.add("pattern", o.pattern.empty() ? "(from config)" : o.pattern);
  m.add("seed", std::to_string(cfg.seed));
  m.config(cfg);
  m.add("total_spikes", std::to_string(run.total_spikes));
  m.add("time_simulate_s", t_sim);
  m.artifact("output", o.out);
  m.write(o.out + ".manifest");

  std::cout << run.total_spikes << " spikes over " << cfg.duration << " s written to " << o.out << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct MineOpts {
  std::string kind;
  std::string input;
  std::optional<double> threshold;
  std::optional<std::size_t> count;
  std::optional<double> expiry_ms;
  std::string intervals;
  std::size_t max_size = 10;
  bool track = false;
  unsigned jobs = 1;
  std::optional<double> tick;
  std::string out;
  bool no_timing = false;
  std::size_t limit = 50;
};

std::string occurrence_text(const std::vector<Occurrence>& occs, const EventSequence& seq) {
  std::ostringstream os;
  for (const auto& occ : occs) {
    os << "    <";
    for (std::size_t i = 0; i < occ.size(); ++i)
      os << (i ? "," : "") << '(' << seq.alphabet().label(seq[occ[i]].type) << ',' << seq[occ[i]].time << ')';
    os << ">\n";
  }
  return os.str();
}

template <typename Ep>
std::string tracked_section(const MiningResult<Ep>& r, const EventSequence& seq) {
  std::ostringstream os;
  os << "\n# occurrences of the largest episodes (event, tick)\n";
  for (const auto& c : largest_frequent(r)) {
    os << "  " << to_string(c, seq.alphabet()) << '\n';
    if (c.occurrences) os << occurrence_text(*c.occurrences, seq);
  }
  return os.str();
}

int run_mine(const MineOpts& o, const std::string& argv) {
  const bool needs_intervals = o.kind != "parallel";
  const bool needs_expiry = o.kind != "serial";
  if (needs_intervals && o.intervals.empty()) throw UsageError(o.kind + " mining needs --intervals");
  if (needs_expiry && !o.expiry_ms) throw UsageError(o.kind + " mining needs --expiry");
  if (o.threshold && o.count) throw UsageError("--threshold and --count are exclusive");

  double tick = 1e-3;
  if (o.tick) tick = *o.tick;
  else if (auto hint = read_tick_seconds_hint(o.input)) tick = *hint;

  MiningConfig cfg;
  cfg.max_size = o.max_size;
  cfg.track_occurrences = o.track;
  cfg.jobs = std::max(1u, o.jobs);
  if (o.threshold) cfg.freq_threshold = *o.threshold;
  if (o.count) cfg.min_count = *o.count;
  if (cfg.freq_threshold < 0.0 || cfg.freq_threshold > 1.0) throw UsageError("--threshold must lie in [0, 1]");
  std::string constraint;
  try {
    if (needs_intervals) {
      cfg.candidate_intervals = parse_interval_list(o.intervals, tick);
      constraint = "intervals " + o.intervals + " ms";
    }
    if (needs_expiry) {
      cfg.expiry = ms_to_ticks(*o.expiry_ms, tick);
      if (cfg.expiry <= 0) throw std::invalid_argument("--expiry must be positive");
      constraint = "expiry " + csv_detail::format_double(*o.expiry_ms) + " ms" +
                   (constraint.empty() ? "" : "; " + constraint);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  auto t0 = std::chrono::steady_clock::now();
  const auto seq = parse_spike_file(o.input, tick);
  const double t_read = since(t0);

  ReportHeader h;
  h.kind = o.kind;
  h.input = o.input;
  h.constraint = constraint;
  h.threshold = cfg.min_count ? 0.0 : cfg.freq_threshold;
  h.threshold_count = cfg.count_threshold(seq.size());
  h.events = seq.size();
  h.timing = !o.no_timing;

  std::string text;
  t0 = std::chrono::steady_clock::now();
  if (o.kind == "serial") {
    const auto r = mine_serial(seq, cfg);
    text = format_results(h, r, seq.alphabet(), o.limit);
    if (o.track) text += tracked_section(r, seq);
  } else if (o.kind == "parallel") {
    const auto r = mine_parallel(seq, cfg);
    text = format_results(h, r, seq.alphabet(), o.limit);
    if (o.track) text += tracked_section(r, seq);
  } else {
    const auto r = mine_synfire(seq, cfg);
    ReportHeader hp = h;
    hp.kind = "synfire, phase 1 (parallel)";
    hp.constraint = "expiry " + csv_detail::format_double(*o.expiry_ms) + " ms";
    text = format_results(hp, r.parallel, seq.alphabet(), o.limit);
    text += "\n# groups rewritten (occurrences replaced)\n";
    for (const auto& g : r.groups) text += "  " + to_string(g, seq.alphabet()) + '\n';
    const auto& rs = r.rewritten.sequence;
    ReportHeader hs = h;
    hs.kind = "synfire, phase 2 (serial on rewritten stream)";
    hs.constraint = "intervals " + o.intervals + " ms";
    hs.events = rs.size();
    hs.threshold_count = cfg.count_threshold(rs.size());
    text += '\n' + format_results(hs, r.serial, rs.alphabet(), o.limit);
    if (o.track) text += tracked_section(r.serial, rs);
  }
  const double t_mine = since(t0);

  if (o.out.empty()) {
    std::cout << text;
    return kOk;
  }
  write_text(o.out, text);
  Manifest m("mine " + o.kind);
  m.add("argv", argv);
  m.artifact("input", o.input);
  m.add("tick_seconds", tick);
  m.add("threshold", cfg.freq_threshold);
  if (cfg.min_count) m.add("count", std::to_string(*cfg.min_count));
  if (needs_expiry) m.add("expiry_ticks", std::to_string(cfg.expiry));
  if (needs_intervals) m.add("intervals_ms", o.intervals);
  m.add("max_size", std::to_string(cfg.max_size));
  m.add("track", o.track ? "true" : "false");
  m.add("jobs", std::to_string(cfg.jobs));
  m.add("time_read_s", t_read);
  m.add("time_mine_s", t_mine);
  m.artifact("output", o.out);
  m.write(o.out + ".manifest");
  std::cout << "results written to " << o.out << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct SignificanceOpts {
  std::string scale = "desk";
  std::string out;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
};

int run_significance_cmd(const SignificanceOpts& o, const std::string& argv) {
  auto p = o.scale == "paper" ? SignificanceParams::paper() : SignificanceParams::desk();
  p.jobs = std::max(1u, o.jobs);
  if (o.seed) p.base_seed = *o.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = run_significance(p);
  const double t_run = since(t0);

  const auto table = to_table_text(report);
  write_text(o.out + ".txt", table);
  write_text(o.out + ".csv", to_csv(report));

  Manifest m("significance");
  m.add("argv", argv);
  m.add("scale", o.scale);
  m.add("base_seed", std::to_string(p.base_seed));
  m.add("random_weight_seeds", std::to_string(p.random_weight_seeds));
  m.add("noise_runs_per_seed", std::to_string(p.noise_runs_per_seed));
  m.add("random_rate_runs", std::to_string(p.random_rate_runs));
  m.add("patterned_runs", std::to_string(p.patterned_runs));
  m.add("max_size", std::to_string(p.max_size));
  m.add("beam_width", std::to_string(p.beam_width));
  m.add("chain_length", std::to_string(p.chain_length));
  m.config(p.base);
  m.add("time_run_s", t_run);
  m.artifact("table", o.out + ".txt");
  m.artifact("csv", o.out + ".csv");
  m.write(o.out + ".manifest");
  std::cout << table;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequent episode discovery in spike trains"};
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* sim_cmd = app.add_subcommand("simulate", "generate spike data from the network model");
  sim_cmd->add_option("--config", sim.config, "network config file (key = value)")->check(CLI::ExistingFile);
  sim_cmd->add_option("--pattern", sim.pattern, "none, example1, example2, example3 or chain-K");
  sim_cmd->add_option("--seed", sim.seed, "noise seed");
  sim_cmd->add_option("--duration", sim.duration, "seconds");
  sim_cmd->add_option("--out", sim.out, "spike CSV to write")->required();

  MineOpts mine;
  auto* mine_cmd = app.add_subcommand("mine", "mine frequent episodes from a spike CSV");
  mine_cmd->add_option("kind", mine.kind, "serial, parallel or synfire")
      ->required()
      ->check(CLI::IsMember({"serial", "parallel", "synfire"}));
  mine_cmd->add_option("input", mine.input, "spike CSV")->required();
  mine_cmd->add_option("--threshold", mine.threshold, "frequency threshold as a fraction of the events");
  mine_cmd->add_option("--count", mine.count, "absolute frequency threshold");
  mine_cmd->add_option("--expiry", mine.expiry_ms, "expiry time in ms (parallel, synfire)");
  mine_cmd->add_option("--intervals", mine.intervals, "candidate intervals in ms, e.g. 0-2,2-4 (serial, synfire)");
  mine_cmd->add_option("--max-size", mine.max_size, "largest episode size")->check(CLI::PositiveNumber);
  mine_cmd->add_flag("--track", mine.track, "report occurrences of the largest episodes");
  mine_cmd->add_option("--jobs", mine.jobs, "counting threads");
  mine_cmd->add_option("--tick", mine.tick, "tick length in seconds (default: file header, else 0.001)");
  mine_cmd->add_option("--limit", mine.limit, "episodes listed per level");
  mine_cmd->add_option("--out", mine.out, "results file (stdout when absent)");
  mine_cmd->add_flag("--no-timing", mine.no_timing, "print '-' instead of timings");

  SignificanceOpts sig;
  auto* sig_cmd = app.add_subcommand("significance", "frequency-vs-size study on random and chained data");
  sig_cmd->add_option("--scale", sig.scale, "desk or paper (paper runs for hours)")
      ->check(CLI::IsMember({"desk", "paper"}));
  sig_cmd->add_option("--out", sig.out, "output prefix (.txt, .csv, .manifest)")->required();
  sig_cmd->add_option("--jobs", sig.jobs, "datasets processed in parallel");
  sig_cmd->add_option("--seed", sig.seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const auto args = joined_argv(argc, argv);
  try {
    if (*sim_cmd) return run_simulate(sim, args);
    if (*mine_cmd) return run_mine(mine, args);
    if (*sig_cmd) return run_significance_cmd(sig, args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kUsage;
}
