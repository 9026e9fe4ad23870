#pragma once

// Two-phase synfire-chain discovery. Frequent parallel episodes found under a
// short expiry are treated as synchronous groups: each of their counted
// occurrences is collapsed into one composite event (named "[A B C]") placed
// at the rounded mean time of its members. Serial mining then runs over the
// rewritten stream.

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "episodes/episode.hpp"
#include "episodes/event.hpp"
#include "episodes/parallel_miner.hpp"
#include "episodes/serial_miner.hpp"

namespace episodes {

struct CompositeEvent {
  EventType type;
  Tick time = 0;
  /// Indices of the replaced events in the original sequence.
  std::vector<std::size_t> members;
};

struct RewrittenStream {
  EventSequence sequence;
  std::vector<CompositeEvent> composites;
};

/// Label used for the composite standing in for `ep`, e.g. "[B C D]".
inline std::string composite_label(const ParallelEpisode& ep, const Alphabet& alpha) {
  std::string s = "[";
  for (std::size_t i = 0; i < ep.size(); ++i) {
    if (i) s += ' ';
    s += alpha.label(ep.types()[i]);
  }
  return s + "]";
}

/// Mean of the member times, rounded half up.
inline Tick composite_time(const EventSequence& seq, const std::vector<std::size_t>& members) {
  if (members.empty()) throw std::invalid_argument("composite event needs members");
  Tick sum = 0;
  for (auto m : members) sum += seq[m].time;
  const auto n = static_cast<Tick>(members.size());
  return (2 * sum + n) / (2 * n);
}

/// Replaces every tracked occurrence by a composite event. Occurrences of
/// different episodes must not share events.
inline RewrittenStream rewrite_stream_detailed(const EventSequence& seq,
                                               const std::vector<ParallelCount>& groups) {
  std::vector<char> used(seq.size(), 0);
  Alphabet alpha = seq.alphabet();
  std::vector<CompositeEvent> composites;

  for (const auto& g : groups) {
    const auto& occs = track_occurrences(g);
    if (occs.empty()) continue;
    const auto type = alpha.intern(composite_label(g.episode, seq.alphabet()));
    for (const auto& occ : occs) {
      for (auto idx : occ) {
        if (idx >= seq.size()) throw std::out_of_range("occurrence refers past the end of the stream");
        if (used[idx])
          throw std::invalid_argument("occurrences overlap on event " + std::to_string(idx));
        used[idx] = 1;
      }
      composites.push_back(CompositeEvent{type, composite_time(seq, occ), occ});
    }
  }

  std::vector<Event> events;
  events.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (!used[i]) events.push_back(seq[i]);
  for (const auto& c : composites) events.push_back(Event{c.type, c.time});
  return {EventSequence(std::move(alpha), std::move(events), seq.tick_seconds()), std::move(composites)};
}

inline EventSequence rewrite_stream(const EventSequence& seq, const std::vector<ParallelCount>& groups) {
  return rewrite_stream_detailed(seq, groups).sequence;
}

struct SynfireResult {
  MiningResult<ParallelEpisode> parallel;
  /// Groups that were rewritten, with only the occurrences actually replaced.
  std::vector<ParallelCount> groups;
  RewrittenStream rewritten;
  MiningResult<SerialEpisode> serial;
};

/// Picks the maximal frequent parallel episodes of size >= 2, highest count
/// first, and keeps only occurrences whose events are not yet claimed by an
/// earlier group.
inline std::vector<ParallelCount> select_groups(const MiningResult<ParallelEpisode>& parallel,
                                                std::size_t n_events) {
  auto groups = maximal_frequent(parallel, 2);
  std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    if (a.freq != b.freq) return a.freq > b.freq;
    return a.episode < b.episode;
  });
  std::vector<char> claimed(n_events, 0);
  for (auto& g : groups) {
    std::vector<Occurrence> kept;
    for (auto& occ : track_occurrences(g)) {
      if (std::any_of(occ.begin(), occ.end(), [&](auto i) { return claimed[i] != 0; })) continue;
      for (auto i : occ) claimed[i] = 1;
      kept.push_back(occ);
    }
    g.freq = kept.size();
    g.occurrences = std::move(kept);
  }
  return groups;
}

/// Parallel mining (expiry), stream rewrite, then serial mining (intervals).
inline SynfireResult mine_synfire(const EventSequence& seq, const MiningConfig& cfg) {
  if (cfg.candidate_intervals.empty())
    throw std::invalid_argument("synfire mining needs candidate intervals");
  MiningConfig phase1 = cfg;
  phase1.track_occurrences = true;

  SynfireResult out;
  out.parallel = mine_parallel(seq, phase1);
  out.groups = select_groups(out.parallel, seq.size());
  out.rewritten = rewrite_stream_detailed(seq, out.groups);
  out.serial = mine_serial(out.rewritten.sequence, cfg);
  return out;
}

}  // namespace episodes
