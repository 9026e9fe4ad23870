#pragma once

// Frequency-versus-size profiles of serial episodes on data without embedded
// structure (random background weights, or random per-step rates) compared
// with data carrying an embedded chain.
//
// Random data is mined at threshold zero. Level 2 counts every ordered pair
// for every interval; from level 3 on, candidates are grown only from the
// `beam_width` most frequent episodes of the previous level. The maximum of
// a level is always reached from a high-count parent since a candidate never
// outcounts its prefix.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "episodes/candidates.hpp"
#include "episodes/episode.hpp"
#include "episodes/serial_miner.hpp"
#include "episodes/simulator.hpp"

namespace episodes {

struct SignificanceParams {
  std::size_t random_weight_seeds = 10;
  std::size_t noise_runs_per_seed = 1;
  std::size_t random_rate_runs = 5;
  std::size_t patterned_runs = 5;
  std::size_t max_size = 6;
  std::size_t beam_width = 500;
  std::size_t chain_length = 10;
  /// Inter-event interval (ticks) used for every edge.
  Interval interval{0, 5};
  std::uint64_t base_seed = 1;
  unsigned jobs = 1;
  NetworkConfig base;

  static SignificanceParams desk() { return {}; }

  static SignificanceParams paper() {
    SignificanceParams p;
    p.noise_runs_per_seed = 10;
    p.random_rate_runs = 50;
    p.patterned_runs = 20;
    p.max_size = 10;
    return p;
  }

  [[nodiscard]] std::size_t random_samples() const {
    return random_weight_seeds * noise_runs_per_seed + random_rate_runs;
  }
};

struct SignificanceRow {
  std::size_t size = 0;
  double avg_max_random = 0.0;
  double avg_min_patterned = 0.0;
};

struct SignificanceReport {
  std::vector<SignificanceRow> rows;
  std::size_t random_samples = 0;
  std::size_t patterned_samples = 0;
  SignificanceParams params;

  /// avg_min_patterned / avg_max_random; infinite when the random max is zero.
  [[nodiscard]] double separation(std::size_t size) const {
    const auto& r = rows.at(size - 1);
    if (r.avg_max_random == 0.0) return std::numeric_limits<double>::infinity();
    return r.avg_min_patterned / r.avg_max_random;
  }
};

/// Highest count of any serial episode of each size 1..max_size, mined at
/// threshold zero with a top-`beam_width` beam from size 3 on.
inline std::vector<std::size_t> max_frequency_profile(const EventSequence& seq,
                                                      const std::vector<Interval>& intervals,
                                                      std::size_t max_size, std::size_t beam_width) {
  std::vector<std::size_t> profile;
  if (max_size == 0) return profile;
  MiningConfig cfg;
  cfg.min_count = 0;
  cfg.candidate_intervals = intervals;

  auto candidates = bootstrap_serial(seq.alphabet());
  for (std::size_t size = 1; size <= max_size; ++size) {
    if (candidates.empty()) {
      profile.push_back(0);
      continue;
    }
    auto counts = count_serial_constrained(candidates, seq, cfg);
    std::size_t best = 0;
    for (const auto& c : counts) best = std::max(best, c.freq);
    profile.push_back(best);
    if (size == max_size) break;

    if (size >= 2 && counts.size() > beam_width) {
      std::stable_sort(counts.begin(), counts.end(),
                       [](const auto& a, const auto& b) { return a.freq > b.freq; });
      counts.resize(beam_width);
    }
    std::vector<SerialEpisode> parents;
    parents.reserve(counts.size());
    for (const auto& c : counts) parents.push_back(c.episode);
    candidates = generate_serial_candidates(std::move(parents), intervals);
  }
  return profile;
}

/// Lowest count among contiguous sub-chains of each size of the chain
/// `chain[0] -> chain[1] -> ...`, every edge constrained by `interval`.
inline std::vector<std::size_t> chain_min_profile(const EventSequence& seq,
                                                  const std::vector<EventType>& chain,
                                                  Interval interval, std::size_t max_size) {
  std::vector<std::size_t> profile;
  MiningConfig cfg;
  for (std::size_t size = 1; size <= max_size && size <= chain.size(); ++size) {
    std::vector<SerialEpisode> subs;
    for (std::size_t s = 0; s + size <= chain.size(); ++s) {
      std::vector<EventType> types(chain.begin() + static_cast<std::ptrdiff_t>(s),
                                   chain.begin() + static_cast<std::ptrdiff_t>(s + size));
      subs.emplace_back(std::move(types), std::vector<Interval>(size - 1, interval));
    }
    auto counts = count_serial_constrained(subs, seq, cfg);
    std::size_t lo = std::numeric_limits<std::size_t>::max();
    for (const auto& c : counts) lo = std::min(lo, c.freq);
    profile.push_back(lo);
  }
  return profile;
}

namespace sig_detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t kind, std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(splitmix(base ^ (kind << 56)) ^ a) ^ (b + 0x51ed27));
}

enum class Kind : std::uint64_t { random_weights = 1, random_rates = 2, patterned = 3 };

struct Dataset {
  Kind kind;
  NetworkConfig config;
};

}  // namespace sig_detail

/// Datasets the study runs, in a fixed order.
inline std::vector<sig_detail::Dataset> significance_datasets(const SignificanceParams& p) {
  using namespace sig_detail;
  std::vector<Dataset> out;
  const auto background = embed_pattern(p.base, "none");
  for (std::size_t w = 0; w < p.random_weight_seeds; ++w) {
    for (std::size_t s = 0; s < p.noise_runs_per_seed; ++s) {
      auto cfg = background;
      cfg.weight_seed = derive_seed(p.base_seed, 1, w, 0);
      cfg.seed = derive_seed(p.base_seed, 1, w, s + 1);
      out.push_back({Kind::random_weights, cfg});
    }
  }
  for (std::size_t r = 0; r < p.random_rate_runs; ++r) {
    auto cfg = background;
    cfg.rate_mode = RateMode::uniform_random;
    cfg.random_rate_max = 2.0 * p.base.resting_rate();
    cfg.seed = derive_seed(p.base_seed, 2, r, 0);
    out.push_back({Kind::random_rates, cfg});
  }
  const auto chained = embed_pattern(p.base, "chain-" + std::to_string(p.chain_length));
  for (std::size_t r = 0; r < p.patterned_runs; ++r) {
    auto cfg = chained;
    cfg.weight_seed = derive_seed(p.base_seed, 3, r, 0);
    cfg.seed = derive_seed(p.base_seed, 3, r, 1);
    out.push_back({Kind::patterned, cfg});
  }
  return out;
}

inline SignificanceReport run_significance(const SignificanceParams& p) {
  using namespace sig_detail;
  if (p.max_size == 0) throw std::invalid_argument("max_size must be positive");
  if (p.chain_length < p.max_size) throw std::invalid_argument("chain must be at least max_size long");

  const auto datasets = significance_datasets(p);
  std::vector<std::vector<std::size_t>> profiles(datasets.size());
  std::vector<EventType> chain;
  for (std::size_t i = 0; i < p.chain_length; ++i) chain.push_back(EventType{static_cast<std::uint32_t>(i)});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < datasets.size(); i = next++) {
      const auto run = simulate(datasets[i].config);
      profiles[i] = datasets[i].kind == Kind::patterned
                        ? chain_min_profile(run.sequence, chain, p.interval, p.max_size)
                        : max_frequency_profile(run.sequence, {p.interval}, p.max_size, p.beam_width);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < std::max(1u, p.jobs); ++j) pool.emplace_back(worker);
    worker();
  }

  SignificanceReport report;
  report.params = p;
  for (std::size_t size = 1; size <= p.max_size; ++size) {
    SignificanceRow row;
    row.size = size;
    double sum_random = 0.0, sum_pattern = 0.0;
    std::size_t n_random = 0, n_pattern = 0;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
      const double v = static_cast<double>(profiles[i].at(size - 1));
      if (datasets[i].kind == Kind::patterned) {
        sum_pattern += v;
        ++n_pattern;
      } else {
        sum_random += v;
        ++n_random;
      }
    }
    row.avg_max_random = n_random ? sum_random / static_cast<double>(n_random) : 0.0;
    row.avg_min_patterned = n_pattern ? sum_pattern / static_cast<double>(n_pattern) : 0.0;
    report.random_samples = n_random;
    report.patterned_samples = n_pattern;
    report.rows.push_back(row);
  }
  return report;
}

inline std::string to_table_text(const SignificanceReport& r) {
  std::ostringstream os;
  os << "# serial episode frequencies in random and patterned data\n"
     << "# interval (" << r.params.interval.low << ',' << r.params.interval.high << "] ticks"
     << ", beam " << r.params.beam_width << ", chain length " << r.params.chain_length << '\n';
  os << std::left << std::setw(8) << "Size" << std::right << std::setw(22) << "Avg. Max. Frequency"
     << std::setw(30) << "Avg. Min. Sub-Episode Freq." << std::setw(12) << "Ratio" << '\n';
  os << std::fixed << std::setprecision(2);
  for (const auto& row : r.rows) {
    os << std::left << std::setw(8) << (std::to_string(row.size) + "-Node") << std::right
       << std::setw(22) << row.avg_max_random << std::setw(30) << row.avg_min_patterned
       << std::setw(12);
    if (row.avg_max_random == 0.0)
      os << "inf";
    else
      os << row.avg_min_patterned / row.avg_max_random;
    os << '\n';
  }
  os << "Sample size: random = " << r.random_samples << ", patterned = " << r.patterned_samples << '\n';
  return os.str();
}

inline std::string to_csv(const SignificanceReport& r) {
  std::ostringstream os;
  os << "size,avg_max_freq_random,avg_min_subepisode_freq_patterned,random_samples,patterned_samples\n";
  os << std::setprecision(10);
  for (const auto& row : r.rows)
    os << row.size << ',' << row.avg_max_random << ',' << row.avg_min_patterned << ','
       << r.random_samples << ',' << r.patterned_samples << '\n';
  return os.str();
}

}  // namespace episodes
