#pragma once

// Brute-force references for the counting engines. Nothing here shares code
// with the automata: occurrences are found by exhaustive search over index
// tuples and the count is the earliest-end greedy over those tuples.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "episodes/episodes.hpp"

namespace oracle {

using namespace episodes;

/// Random stream: up to `max_events` events over `n_types` labels "A".."E",
/// non-decreasing ticks with frequent ties.
inline EventSequence random_sequence(std::mt19937_64& rng, std::size_t max_events, std::size_t n_types) {
  std::uniform_int_distribution<std::size_t> len(0, max_events);
  std::uniform_int_distribution<std::uint32_t> type(0, static_cast<std::uint32_t>(n_types - 1));
  std::uniform_int_distribution<int> step(0, 3);
  Alphabet alpha;
  for (std::size_t i = 0; i < n_types; ++i) alpha.intern(std::string(1, static_cast<char>('A' + i)));
  std::vector<Event> evs;
  Tick t = 0;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    t += step(rng);
    evs.push_back(Event{EventType{type(rng)}, t});
  }
  return EventSequence(std::move(alpha), std::move(evs));
}

inline SerialEpisode random_serial(std::mt19937_64& rng, std::size_t n_types, std::size_t min_size,
                                   std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size(min_size, max_size);
  std::uniform_int_distribution<std::uint32_t> type(0, static_cast<std::uint32_t>(n_types - 1));
  std::uniform_int_distribution<Tick> lo(0, 3), width(1, 5);
  const auto n = size(rng);
  std::vector<EventType> types;
  std::vector<Interval> ivs;
  for (std::size_t i = 0; i < n; ++i) types.push_back(EventType{type(rng)});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Tick l = lo(rng);
    ivs.emplace_back(l, l + width(rng));
  }
  return SerialEpisode(std::move(types), std::move(ivs));
}

inline ParallelEpisode random_parallel(std::mt19937_64& rng, std::size_t n_types, std::size_t min_size,
                                       std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size(min_size, max_size);
  std::uniform_int_distribution<std::uint32_t> type(0, static_cast<std::uint32_t>(n_types - 1));
  std::vector<EventType> types(size(rng));
  for (auto& t : types) t = EventType{type(rng)};
  return ParallelEpisode(std::move(types));
}

/// True when some constraint-valid occurrence of `ep` uses only indices in
/// (after, last] and ends exactly at `last`.
inline bool serial_occurrence_ending_at(const SerialEpisode& ep, const EventSequence& seq, std::ptrdiff_t after,
                                        std::size_t last) {
  if (seq[last].type != ep.type(ep.size() - 1)) return false;
  // walk backwards: node `j` sits at index `at`
  std::function<bool(std::size_t, std::size_t)> back = [&](std::size_t j, std::size_t at) {
    if (j == 0) return true;
    const auto& iv = ep.interval(j - 1);
    for (std::ptrdiff_t p = static_cast<std::ptrdiff_t>(at) - 1; p > after; --p) {
      const auto up = static_cast<std::size_t>(p);
      if (seq[up].type != ep.type(j - 1)) continue;
      if (!iv.contains(seq[at].time - seq[up].time)) continue;
      if (back(j - 1, up)) return true;
    }
    return false;
  };
  return back(ep.size() - 1, last);
}

/// Maximum number of non-overlapped constraint-valid occurrences.
inline std::size_t serial_count(const SerialEpisode& ep, const EventSequence& seq) {
  std::size_t count = 0;
  std::ptrdiff_t after = -1;
  for (std::size_t e = 0; e < seq.size(); ++e) {
    if (static_cast<std::ptrdiff_t>(e) <= after) continue;
    if (serial_occurrence_ending_at(ep, seq, after, e)) {
      ++count;
      after = static_cast<std::ptrdiff_t>(e);
    }
  }
  return count;
}

/// Exhaustive search for a multiset occurrence in (after, last] that uses
/// `last`, with span at most `expiry`.
inline bool parallel_occurrence_ending_at(const ParallelEpisode& ep, const EventSequence& seq,
                                          std::ptrdiff_t after, std::size_t last, Tick expiry) {
  std::vector<EventType> need = ep.types();
  auto self = std::find(need.begin(), need.end(), seq[last].type);
  if (self == need.end()) return false;
  need.erase(self);
  std::vector<std::size_t> chosen{last};
  std::function<bool(std::size_t, std::ptrdiff_t)> pick = [&](std::size_t k, std::ptrdiff_t below) {
    if (k == need.size()) {
      Tick lo = seq[chosen[0]].time, hi = lo;
      for (auto c : chosen) lo = std::min(lo, seq[c].time), hi = std::max(hi, seq[c].time);
      return hi - lo <= expiry;
    }
    // equal types are picked at strictly decreasing indices to avoid repeats
    const bool same_as_prev = k > 0 && need[k] == need[k - 1];
    const std::ptrdiff_t start = same_as_prev ? below - 1 : static_cast<std::ptrdiff_t>(last) - 1;
    for (std::ptrdiff_t p = start; p > after; --p) {
      const auto up = static_cast<std::size_t>(p);
      if (seq[up].type != need[k]) continue;
      if (seq[last].time - seq[up].time > expiry) break;
      chosen.push_back(up);
      if (pick(k + 1, p)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return pick(0, static_cast<std::ptrdiff_t>(last));
}

inline std::size_t parallel_count(const ParallelEpisode& ep, const EventSequence& seq, Tick expiry) {
  std::size_t count = 0;
  std::ptrdiff_t after = -1;
  for (std::size_t e = 0; e < seq.size(); ++e) {
    if (parallel_occurrence_ending_at(ep, seq, after, e, expiry)) {
      ++count;
      after = static_cast<std::ptrdiff_t>(e);
    }
  }
  return count;
}

inline bool valid_serial_occurrence(const SerialEpisode& ep, const EventSequence& seq, const Occurrence& occ) {
  if (occ.size() != ep.size()) return false;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (occ[i] >= seq.size() || seq[occ[i]].type != ep.type(i)) return false;
    if (i && (occ[i] <= occ[i - 1] || !ep.interval(i - 1).contains(seq[occ[i]].time - seq[occ[i - 1]].time)))
      return false;
  }
  return true;
}

inline bool valid_parallel_occurrence(const ParallelEpisode& ep, const EventSequence& seq, const Occurrence& occ,
                                      Tick expiry) {
  if (occ.size() != ep.size()) return false;
  std::vector<EventType> types;
  Tick lo = 0, hi = 0;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (occ[i] >= seq.size() || (i && occ[i] <= occ[i - 1])) return false;
    types.push_back(seq[occ[i]].type);
    lo = i ? std::min(lo, seq[occ[i]].time) : seq[occ[i]].time;
    hi = i ? std::max(hi, seq[occ[i]].time) : seq[occ[i]].time;
  }
  std::sort(types.begin(), types.end());
  return types == ep.types() && hi - lo <= expiry;
}

/// Every occurrence lies entirely before the next one (by stream position).
inline bool pairwise_non_overlapped(const std::vector<Occurrence>& occs) {
  for (std::size_t i = 1; i < occs.size(); ++i)
    if (occs[i].front() <= occs[i - 1].back()) return false;
  return true;
}

}  // namespace oracle
