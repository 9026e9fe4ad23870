#pragma once

// Non-overlapped counting of parallel episodes under an expiry constraint:
// every counted occurrence must fit inside a span of at most T_X ticks.
//
// Each candidate keeps, per distinct event type, the events of that type seen
// within the last T_X ticks. The first time all multiplicities are met the
// occurrence is recorded (earliest pending events per type) and the
// candidate's pending state is cleared.

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

namespace parallel_detail {

struct Pending {
  Tick time;
  std::size_t event;
};

struct Slot {
  EventType type;
  std::size_t required;
  std::deque<Pending> pending;
};

struct Recognizer {
  const ParallelEpisode* episode = nullptr;
  std::vector<Slot> slots;
  std::size_t freq = 0;
  std::size_t live = 0;
  std::size_t peak = 0;
  std::vector<Occurrence> occurrences;
};

struct WaitEntry {
  std::uint32_t recognizer;
  std::uint32_t slot;
};

class ParallelCounter {
 public:
  ParallelCounter(std::span<const ParallelEpisode> candidates, std::size_t n_types, Tick expiry, bool track)
      : recs_(candidates.size()), waits_(n_types), expiry_(expiry), track_(track) {
    for (std::size_t r = 0; r < candidates.size(); ++r) {
      auto& rec = recs_[r];
      rec.episode = &candidates[r];
      for (auto [type, mult] : candidates[r].multiplicities()) {
        if (type.id >= n_types) throw std::invalid_argument("candidate type outside alphabet");
        waits_[type.id].push_back(
            WaitEntry{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(rec.slots.size())});
        rec.slots.push_back(Slot{type, mult, {}});
      }
    }
  }

  void run(const EventSequence& seq) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const auto& ev = seq[i];
      for (const auto& w : waits_[ev.type.id]) update(recs_[w.recognizer], w.slot, i, ev.time);
    }
  }

  std::vector<ParallelCount> results() && {
    std::vector<ParallelCount> out;
    out.reserve(recs_.size());
    for (auto& rec : recs_) {
      ParallelCount c{*rec.episode, rec.freq, std::nullopt, rec.peak};
      if (track_) c.occurrences = std::move(rec.occurrences);
      out.push_back(std::move(c));
    }
    return out;
  }

 private:
  void update(Recognizer& rec, std::uint32_t s, std::size_t i, Tick t) {
    bool complete = true;
    for (auto& slot : rec.slots) {
      while (!slot.pending.empty() && t - slot.pending.front().time > expiry_) {
        slot.pending.pop_front();
        --rec.live;
      }
    }
    rec.slots[s].pending.push_back(Pending{t, i});
    rec.peak = std::max(rec.peak, ++rec.live);
    for (const auto& slot : rec.slots) complete = complete && slot.pending.size() >= slot.required;
    if (!complete) return;

    ++rec.freq;
    if (track_) {
      Occurrence occ;
      for (const auto& slot : rec.slots)
        for (std::size_t k = 0; k < slot.required; ++k) occ.push_back(slot.pending[k].event);
      std::sort(occ.begin(), occ.end());
      rec.occurrences.push_back(std::move(occ));
    }
    for (auto& slot : rec.slots) slot.pending.clear();
    rec.live = 0;
  }

  std::vector<Recognizer> recs_;
  std::vector<std::vector<WaitEntry>> waits_;
  Tick expiry_;
  bool track_;
};

}  // namespace parallel_detail

/// Counts non-overlapped occurrences of each parallel candidate whose span
/// (last minus first event time) is at most `cfg.expiry` ticks.
inline std::vector<ParallelCount> count_parallel_expiry(std::span<const ParallelEpisode> candidates,
                                                        const EventSequence& seq,
                                                        const MiningConfig& cfg) {
  if (cfg.expiry <= 0) throw std::invalid_argument("expiry time must be positive");
  std::vector<ParallelCount> out;
  if (candidates.empty()) return out;
  const auto n_types = seq.alphabet().size();
  const unsigned jobs =
      std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(candidates.size())));

  auto run_chunk = [&](std::span<const ParallelEpisode> chunk) {
    parallel_detail::ParallelCounter counter(chunk, n_types, cfg.expiry, cfg.track_occurrences);
    counter.run(seq);
    return std::move(counter).results();
  };
  if (jobs == 1) return run_chunk(candidates);

  std::vector<std::vector<ParallelCount>> parts(jobs);
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

/// Level-wise parallel mining under expiry `cfg.expiry`.
inline MiningResult<ParallelEpisode> mine_parallel(const EventSequence& seq, const MiningConfig& cfg) {
  if (cfg.expiry <= 0) throw std::invalid_argument("expiry time must be positive");
  const auto threshold = cfg.count_threshold(seq.size());

  MiningResult<ParallelEpisode> result;
  std::vector<ParallelEpisode> candidates;
  for (auto t : seq.alphabet().types()) candidates.emplace_back(std::vector{t});

  for (std::size_t size = 1; size <= cfg.max_size && !candidates.empty(); ++size) {
    const auto t0 = std::chrono::steady_clock::now();
    auto counts = count_parallel_expiry(candidates, seq, cfg);
    LevelResult<ParallelEpisode> level;
    level.size = size;
    level.candidates = candidates.size();
    for (auto& c : counts)
      if (c.freq >= threshold) level.frequent.push_back(std::move(c));
    level.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<ParallelEpisode> frequent;
    frequent.reserve(level.frequent.size());
    for (const auto& c : level.frequent) frequent.push_back(c.episode);
    result.push_back(std::move(level));
    if (frequent.empty() || size == cfg.max_size) break;
    candidates = generate_parallel_candidates(std::move(frequent));
  }
  return result;
}

/// Frequent parallel episodes not contained in a larger frequent one.
inline std::vector<ParallelCount> maximal_frequent(const MiningResult<ParallelEpisode>& r,
                                                   std::size_t min_size = 1) {
  std::vector<ParallelCount> out;
  for (std::size_t l = 0; l < r.size(); ++l) {
    for (const auto& c : r[l].frequent) {
      if (c.episode.size() < min_size) continue;
      bool contained = false;
      for (std::size_t m = l + 1; m < r.size() && !contained; ++m)
        for (const auto& big : r[m].frequent)
          if (is_subepisode(c.episode, big.episode)) {
            contained = true;
            break;
          }
      if (!contained) out.push_back(c);
    }
  }
  return out;
}

}  // namespace episodes
