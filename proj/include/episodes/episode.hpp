#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "episodes/event.hpp"

namespace episodes {

/// Left-open, right-closed gap range (low, high] in ticks.
struct Interval {
  Tick low = 0;
  Tick high = 1;

  constexpr Interval() = default;
  constexpr Interval(Tick lo, Tick hi) : low(lo), high(hi) {
    if (lo < 0 || lo >= hi) throw std::invalid_argument("interval requires 0 <= low < high");
  }

  [[nodiscard]] constexpr bool contains(Tick gap) const { return low < gap && gap <= high; }

  friend constexpr auto operator<=>(const Interval&, const Interval&) = default;
};

/// Ordered event types with one inter-event interval per consecutive pair.
class SerialEpisode {
 public:
  SerialEpisode() = default;

  SerialEpisode(std::vector<EventType> types, std::vector<Interval> intervals)
      : types_(std::move(types)), intervals_(std::move(intervals)) {
    if (types_.empty()) throw std::invalid_argument("serial episode needs at least one node");
    if (intervals_.size() + 1 != types_.size())
      throw std::invalid_argument("serial episode needs exactly size-1 intervals");
  }

  explicit SerialEpisode(EventType single) : types_{single} {}

  [[nodiscard]] std::size_t size() const { return types_.size(); }
  [[nodiscard]] const std::vector<EventType>& types() const { return types_; }
  [[nodiscard]] const std::vector<Interval>& intervals() const { return intervals_; }
  [[nodiscard]] EventType type(std::size_t i) const { return types_[i]; }
  /// Constraint between node i and node i+1.
  [[nodiscard]] const Interval& interval(std::size_t i) const { return intervals_[i]; }

  /// Largest possible first-to-last gap of an occurrence.
  [[nodiscard]] Tick max_span() const {
    Tick s = 0;
    for (const auto& iv : intervals_) s += iv.high;
    return s;
  }

  friend auto operator<=>(const SerialEpisode&, const SerialEpisode&) = default;
  friend bool operator==(const SerialEpisode&, const SerialEpisode&) = default;

 private:
  std::vector<EventType> types_;
  std::vector<Interval> intervals_;
};

/// Multiset of event types, stored in ascending type-id order.
class ParallelEpisode {
 public:
  ParallelEpisode() = default;

  explicit ParallelEpisode(std::vector<EventType> types) : types_(std::move(types)) {
    if (types_.empty()) throw std::invalid_argument("parallel episode needs at least one node");
    std::sort(types_.begin(), types_.end());
  }

  [[nodiscard]] std::size_t size() const { return types_.size(); }
  [[nodiscard]] const std::vector<EventType>& types() const { return types_; }

  /// Distinct types with their multiplicities, ascending by type.
  [[nodiscard]] std::vector<std::pair<EventType, std::size_t>> multiplicities() const {
    std::vector<std::pair<EventType, std::size_t>> out;
    for (auto t : types_) {
      if (!out.empty() && out.back().first == t)
        ++out.back().second;
      else
        out.emplace_back(t, 1);
    }
    return out;
  }

  friend auto operator<=>(const ParallelEpisode&, const ParallelEpisode&) = default;
  friend bool operator==(const ParallelEpisode&, const ParallelEpisode&) = default;

 private:
  std::vector<EventType> types_;
};

using AnyEpisode = std::variant<SerialEpisode, ParallelEpisode>;

/// Event indices (into the counted sequence) of one occurrence, ascending.
using Occurrence = std::vector<std::size_t>;

template <typename Episode>
struct EpisodeCount {
  Episode episode;
  std::size_t freq = 0;
  std::optional<std::vector<Occurrence>> occurrences;
  /// Peak number of live partial-occurrence entries held while counting.
  std::size_t peak_state = 0;
};

using SerialCount = EpisodeCount<SerialEpisode>;
using ParallelCount = EpisodeCount<ParallelEpisode>;

struct MiningConfig {
  double freq_threshold = 0.01;
  std::size_t max_size = 10;
  /// Candidate inter-event intervals for serial mining; disjoint, sorted by low.
  std::vector<Interval> candidate_intervals;
  /// Expiry T_X in ticks for parallel mining.
  Tick expiry = 0;
  bool track_occurrences = false;
  /// Overrides the fractional threshold when set.
  std::optional<std::size_t> min_count;
  /// Worker threads used for one counting pass.
  unsigned jobs = 1;
  /// Drop tlist entries that can no longer license a successor.
  bool prune_stale = true;

  /// ceil(freq_threshold * n), tolerant of binary rounding in the product.
  [[nodiscard]] std::size_t count_threshold(std::size_t n_events) const {
    if (min_count) return *min_count;
    if (freq_threshold < 0.0 || freq_threshold > 1.0)
      throw std::invalid_argument("frequency threshold must lie in [0, 1]");
    const double raw = freq_threshold * static_cast<double>(n_events);
    const double nearest = std::round(raw);
    if (std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw))
      return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(raw));
  }

  void validate_intervals() const {
    for (std::size_t i = 1; i < candidate_intervals.size(); ++i) {
      const auto& a = candidate_intervals[i - 1];
      const auto& b = candidate_intervals[i];
      if (b.low < a.low) throw std::invalid_argument("candidate intervals must be sorted by low");
      if (b.low < a.high) throw std::invalid_argument("candidate intervals overlap");
    }
  }
};

// ---------------------------------------------------------------------------
// Subepisode relation (event-type structure only; intervals are ignored).

inline bool is_subepisode(const SerialEpisode& beta, const SerialEpisode& alpha) {
  std::size_t j = 0;
  for (auto t : alpha.types())
    if (j < beta.size() && beta.type(j) == t) ++j;
  return j == beta.size();
}

inline bool is_subepisode(const ParallelEpisode& beta, const ParallelEpisode& alpha) {
  return std::includes(alpha.types().begin(), alpha.types().end(), beta.types().begin(),
                       beta.types().end());
}

inline bool is_subepisode(const AnyEpisode& beta, const AnyEpisode& alpha) {
  if (beta.index() != alpha.index())
    throw std::invalid_argument("subepisode test needs two episodes of the same kind");
  if (const auto* s = std::get_if<SerialEpisode>(&beta))
    return is_subepisode(*s, std::get<SerialEpisode>(alpha));
  return is_subepisode(std::get<ParallelEpisode>(beta), std::get<ParallelEpisode>(alpha));
}

// ---------------------------------------------------------------------------
// Text rendering: `A -(lo,hi]-> B : freq` and `{A B C} : freq`.

inline std::string to_string(const SerialEpisode& ep, const Alphabet& alpha) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ep.size(); ++i) {
    if (i) os << " -(" << ep.interval(i - 1).low << ',' << ep.interval(i - 1).high << "]-> ";
    os << alpha.label(ep.type(i));
  }
  return os.str();
}

inline std::string to_string(const ParallelEpisode& ep, const Alphabet& alpha) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < ep.size(); ++i) os << (i ? " " : "") << alpha.label(ep.types()[i]);
  os << '}';
  return os.str();
}

template <typename Episode>
std::string to_string(const EpisodeCount<Episode>& c, const Alphabet& alpha) {
  return to_string(c.episode, alpha) + " : " + std::to_string(c.freq);
}

/// Returns the recorded occurrences; throws if counting ran without tracking.
template <typename Episode>
const std::vector<Occurrence>& track_occurrences(const EpisodeCount<Episode>& c) {
  if (!c.occurrences) throw std::logic_error("episode was counted without occurrence tracking");
  return *c.occurrences;
}

/// Frequent episodes of one size, as found by a level-wise miner.
template <typename Episode>
struct LevelResult {
  std::size_t size = 0;
  std::size_t candidates = 0;
  double seconds = 0.0;
  std::vector<EpisodeCount<Episode>> frequent;
};

template <typename Episode>
using MiningResult = std::vector<LevelResult<Episode>>;

/// Frequent episodes of the largest size reached, or empty.
template <typename Episode>
std::vector<EpisodeCount<Episode>> largest_frequent(const MiningResult<Episode>& r) {
  for (auto it = r.rbegin(); it != r.rend(); ++it)
    if (!it->frequent.empty()) return it->frequent;
  return {};
}

}  // namespace episodes
