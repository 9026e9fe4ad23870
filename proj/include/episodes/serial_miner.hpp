#pragma once

// Non-overlapped occurrence counting for serial episodes whose consecutive
// events must be separated by a gap in a per-edge interval (low, high].
//
// Every candidate gets a chain of nodes, one per episode position. A node's
// tlist holds the times of events that end a constraint-valid partial
// occurrence up to that position. Nodes are reached through `waits` lists
// keyed by event type; a node for position j > 1 is only waited on once its
// predecessor has accepted something. When the last node accepts, the count
// is bumped and the candidate's whole automaton is reset, so the next
// occurrence may only use later events.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "episodes/candidates.hpp"
#include "episodes/episode.hpp"
#include "episodes/event.hpp"

namespace episodes {

namespace serial_detail {

constexpr std::uint32_t kNoRef = std::numeric_limits<std::uint32_t>::max();
constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

struct TEntry {
  Tick init;
  std::uint32_t ref;  // index into Automaton::pool, kNoRef when not tracking
};

// Accepted event plus the pool entry of the predecessor that licensed it.
struct PoolEntry {
  std::size_t event;
  std::uint32_t back;
};

struct Automaton {
  const SerialEpisode* episode = nullptr;
  std::vector<std::deque<TEntry>> tlist;
  std::vector<char> visited;
  std::uint32_t generation = 0;
  std::size_t reset_at = kNever;
  std::size_t freq = 0;
  std::size_t live = 0;
  std::size_t peak = 0;
  std::vector<PoolEntry> pool;
  std::vector<Occurrence> occurrences;
};

struct WaitEntry {
  std::uint32_t automaton;
  std::uint32_t node;  // 0-based position
  std::uint32_t generation;
};

class SerialCounter {
 public:
  SerialCounter(std::span<const SerialEpisode> candidates, std::size_t n_types, bool track, bool prune)
      : autos_(candidates.size()), waits_(n_types), track_(track), prune_(prune) {
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      const auto& ep = candidates[a];
      if (ep.intervals().size() + 1 != ep.size())
        throw std::invalid_argument("serial candidate is missing intervals");
      if (ep.type(0).id >= n_types) throw std::invalid_argument("candidate type outside alphabet");
      auto& au = autos_[a];
      au.episode = &ep;
      au.tlist.resize(ep.size());
      au.visited.assign(ep.size(), 0);
      waits_[ep.type(0).id].push_back(WaitEntry{static_cast<std::uint32_t>(a), 0, 0});
    }
  }

  void run(const EventSequence& seq) {
    for (std::size_t i = 0; i < seq.size(); ++i) step(i, seq[i]);
  }

  std::vector<SerialCount> results() && {
    std::vector<SerialCount> out;
    out.reserve(autos_.size());
    for (auto& au : autos_) {
      SerialCount c{*au.episode, au.freq, std::nullopt, au.peak};
      if (track_) c.occurrences = std::move(au.occurrences);
      out.push_back(std::move(c));
    }
    return out;
  }

 private:
  void step(std::size_t i, const Event& ev) {
    auto& list = waits_[ev.type.id];
    const std::size_t snapshot = list.size();
    std::size_t kept = 0;
    for (std::size_t r = 0; r < snapshot; ++r) {
      const WaitEntry we = list[r];
      auto& au = autos_[we.automaton];
      if (we.node > 0 && we.generation != au.generation) continue;  // dropped by a reset
      list[kept++] = we;
      if (au.reset_at == i) continue;  // this event already closed an occurrence
      update(we.automaton, au, we.node, i, ev.time);
    }
    // nodes activated during this event were appended past the snapshot
    list.erase(list.begin() + static_cast<std::ptrdiff_t>(kept),
               list.begin() + static_cast<std::ptrdiff_t>(snapshot));
  }

  void update(std::uint32_t a, Automaton& au, std::uint32_t j, std::size_t i, Tick t) {
    const auto& ep = *au.episode;
    const std::size_t last = ep.size() - 1;

    if (prune_ && j < last) drop_older(au, au.tlist[j], t - ep.interval(j).high);

    bool accepted = (j == 0);
    std::uint32_t back = kNoRef;
    if (j > 0) {
      auto& prev = au.tlist[j - 1];
      const auto& iv = ep.interval(j - 1);
      if (prune_) drop_older(au, prev, t - iv.high);
      // gaps grow towards the front; the newest entry past `low` decides
      for (auto it = prev.rbegin(); it != prev.rend(); ++it) {
        const Tick gap = t - it->init;
        if (gap > iv.low) {
          if (gap <= iv.high) {
            accepted = true;
            back = it->ref;
          }
          break;
        }
      }
    }
    if (!accepted) return;

    if (j == last) {
      complete(au, i, back);
      return;
    }
    std::uint32_t ref = kNoRef;
    if (track_) {
      au.pool.push_back(PoolEntry{i, back});
      ref = static_cast<std::uint32_t>(au.pool.size() - 1);
    }
    au.tlist[j].push_back(TEntry{t, ref});
    au.peak = std::max(au.peak, ++au.live);
    if (!au.visited[j]) {
      au.visited[j] = 1;
      waits_[ep.type(j + 1).id].push_back(WaitEntry{a, j + 1, au.generation});
    }
  }

  // Removes entries with init < bound, i.e. gap to the current event > high.
  void drop_older(Automaton& au, std::deque<TEntry>& tl, Tick bound) {
    while (!tl.empty() && tl.front().init < bound) {
      tl.pop_front();
      --au.live;
    }
  }

  void complete(Automaton& au, std::size_t i, std::uint32_t back) {
    ++au.freq;
    if (track_) {
      Occurrence occ{i};
      for (auto r = back; r != kNoRef; r = au.pool[r].back) occ.push_back(au.pool[r].event);
      std::reverse(occ.begin(), occ.end());
      au.occurrences.push_back(std::move(occ));
    }
    for (auto& tl : au.tlist) tl.clear();
    std::fill(au.visited.begin(), au.visited.end(), 0);
    au.pool.clear();
    au.live = 0;
    ++au.generation;
    au.reset_at = i;
  }

  std::vector<Automaton> autos_;
  std::vector<std::vector<WaitEntry>> waits_;
  bool track_;
  bool prune_;
};

}  // namespace serial_detail

/// Counts non-overlapped, interval-constrained occurrences of every candidate
/// in one pass over `seq`. Results follow candidate order. With
/// `cfg.jobs > 1` the candidate set is split across threads, each doing its
/// own pass.
inline std::vector<SerialCount> count_serial_constrained(std::span<const SerialEpisode> candidates,
                                                         const EventSequence& seq,
                                                         const MiningConfig& cfg) {
  std::vector<SerialCount> out;
  if (candidates.empty()) return out;
  const auto n_types = seq.alphabet().size();
  const unsigned jobs =
      std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(candidates.size())));

  auto run_chunk = [&](std::span<const SerialEpisode> chunk) {
    serial_detail::SerialCounter counter(chunk, n_types, cfg.track_occurrences, cfg.prune_stale);
    counter.run(seq);
    return std::move(counter).results();
  };

  if (jobs == 1) return run_chunk(candidates);

  std::vector<std::vector<SerialCount>> parts(jobs);
  {
    std::vector<std::jthread> workers;
    const std::size_t per = (candidates.size() + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
      const std::size_t lo = std::min(candidates.size(), w * per);
      const std::size_t hi = std::min(candidates.size(), lo + per);
      workers.emplace_back([&, w, lo, hi] { parts[w] = run_chunk(candidates.subspan(lo, hi - lo)); });
    }
  }
  out.reserve(candidates.size());
  for (auto& p : parts)
    for (auto& c : p) out.push_back(std::move(c));
  return out;
}

/// Level-wise serial mining with per-edge interval discovery over
/// `cfg.candidate_intervals`.
inline MiningResult<SerialEpisode> mine_serial(const EventSequence& seq, const MiningConfig& cfg) {
  if (cfg.candidate_intervals.empty())
    throw std::invalid_argument("serial mining needs at least one candidate interval");
  cfg.validate_intervals();
  const auto threshold = cfg.count_threshold(seq.size());

  MiningResult<SerialEpisode> result;
  auto candidates = bootstrap_serial(seq.alphabet());
  for (std::size_t size = 1; size <= cfg.max_size && !candidates.empty(); ++size) {
    const auto t0 = std::chrono::steady_clock::now();
    auto counts = count_serial_constrained(candidates, seq, cfg);
    LevelResult<SerialEpisode> level;
    level.size = size;
    level.candidates = candidates.size();
    for (auto& c : counts)
      if (c.freq >= threshold) level.frequent.push_back(std::move(c));
    level.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<SerialEpisode> frequent;
    frequent.reserve(level.frequent.size());
    for (const auto& c : level.frequent) frequent.push_back(c.episode);
    result.push_back(std::move(level));
    if (frequent.empty() || size == cfg.max_size) break;
    candidates = generate_serial_candidates(std::move(frequent), cfg.candidate_intervals);
  }
  return result;
}

}  // namespace episodes
