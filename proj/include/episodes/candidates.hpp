#pragma once

// Level-wise candidate generation.
//
// Serial episodes with intervals join on a shared (k-1)-node overlap: the
// suffix of one frequent episode (types and intervals) must equal the prefix
// of another. No further subepisode pruning is applied, because the interval
// a skipped-node subepisode should inherit is undefined.
//
// Parallel episodes use the usual sorted-prefix Apriori join followed by a
// sub-multiset prune.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "episodes/episode.hpp"

namespace episodes {

namespace cand_detail {

template <typename Episode>
std::size_t common_size(const std::vector<Episode>& eps) {
  if (eps.empty()) return 0;
  const auto k = eps.front().size();
  for (const auto& e : eps)
    if (e.size() != k) throw std::invalid_argument("candidate join needs episodes of one size");
  return k;
}

// Key identifying a (k-1)-node serial episode: its types and intervals.
using SerialKey = std::pair<std::vector<EventType>, std::vector<Interval>>;

inline SerialKey prefix_key(const SerialEpisode& e) {
  std::vector<EventType> t(e.types().begin(), e.types().end() - 1);
  std::vector<Interval> iv;
  if (e.size() >= 2) iv.assign(e.intervals().begin(), e.intervals().end() - 1);
  return {std::move(t), std::move(iv)};
}

inline SerialKey suffix_key(const SerialEpisode& e) {
  std::vector<EventType> t(e.types().begin() + 1, e.types().end());
  std::vector<Interval> iv;
  if (e.size() >= 2) iv.assign(e.intervals().begin() + 1, e.intervals().end());
  return {std::move(t), std::move(iv)};
}

}  // namespace cand_detail

/// All 1-node serial episodes over the alphabet.
inline std::vector<SerialEpisode> bootstrap_serial(const Alphabet& alphabet) {
  std::vector<SerialEpisode> out;
  out.reserve(alphabet.size());
  for (auto t : alphabet.types()) out.emplace_back(t);
  return out;
}

/// Suffix-prefix join of frequent k-node serial episodes.
///
/// For k == 1 the overlap is empty, so every ordered pair (including
/// self-pairs) is joined once per entry of `intervals`. For k >= 2 the new
/// edge inherits the last interval of the right-hand episode and
/// `intervals` is unused. Output is sorted and duplicate-free.
inline std::vector<SerialEpisode> generate_serial_candidates(
    std::vector<SerialEpisode> frequent, const std::vector<Interval>& intervals = {}) {
  using namespace cand_detail;
  const auto k = common_size(frequent);
  std::sort(frequent.begin(), frequent.end());
  frequent.erase(std::unique(frequent.begin(), frequent.end()), frequent.end());

  std::vector<SerialEpisode> out;
  if (frequent.empty()) return out;

  if (k == 1) {
    out.reserve(frequent.size() * frequent.size() * intervals.size());
    for (const auto& a : frequent)
      for (const auto& b : frequent)
        for (const auto& iv : intervals) out.emplace_back(std::vector{a.type(0), b.type(0)}, std::vector{iv});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // right-hand episodes grouped by their (k-1)-prefix
  std::map<SerialKey, std::vector<const SerialEpisode*>> by_prefix;
  for (const auto& b : frequent) by_prefix[prefix_key(b)].push_back(&b);

  for (const auto& a : frequent) {
    auto it = by_prefix.find(suffix_key(a));
    if (it == by_prefix.end()) continue;
    for (const auto* b : it->second) {
      auto types = a.types();
      types.push_back(b->types().back());
      auto ivs = a.intervals();
      ivs.push_back(b->intervals().back());
      out.emplace_back(std::move(types), std::move(ivs));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Apriori join of frequent k-node parallel episodes: two episodes sharing
/// their first k-1 (sorted) types combine, and any result with an
/// infrequent k-sub-multiset is dropped.
inline std::vector<ParallelEpisode> generate_parallel_candidates(std::vector<ParallelEpisode> frequent) {
  const auto k = cand_detail::common_size(frequent);
  std::sort(frequent.begin(), frequent.end());
  frequent.erase(std::unique(frequent.begin(), frequent.end()), frequent.end());

  std::vector<ParallelEpisode> out;
  if (frequent.empty()) return out;
  std::set<std::vector<EventType>> known;
  for (const auto& e : frequent) known.insert(e.types());

  // sorted order keeps each shared-prefix block contiguous
  for (std::size_t i = 0; i < frequent.size(); ++i) {
    const auto& a = frequent[i].types();
    for (std::size_t j = i; j < frequent.size(); ++j) {
      const auto& b = frequent[j].types();
      if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) break;
      auto merged = a;
      merged.push_back(b.back());

      bool all_frequent = true;
      for (std::size_t drop = 0; drop < merged.size() && all_frequent; ++drop) {
        std::vector<EventType> sub;
        sub.reserve(k);
        for (std::size_t p = 0; p < merged.size(); ++p)
          if (p != drop) sub.push_back(merged[p]);
        all_frequent = known.count(sub) != 0;
      }
      if (all_frequent) out.emplace_back(std::move(merged));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace episodes
