#include <gtest/gtest.h>

#include "episodes/episodes.hpp"

using namespace episodes;

namespace {

ParallelCount tracked(const ParallelEpisode& ep, std::vector<Occurrence> occs) {
  return ParallelCount{ep, occs.size(), std::move(occs), 0};
}

}  // namespace

TEST(Composite, MeanTimeRoundsHalfUp) {
  auto seq = EventSequence::from_pairs({{"B", 10}, {"C", 11}, {"D", 12}, {"E", 13}});
  EXPECT_EQ(composite_time(seq, {0, 1, 2}), 11);
  EXPECT_EQ(composite_time(seq, {0, 1}), 11);  // 10.5
  EXPECT_EQ(composite_time(seq, {0, 3}), 12);  // 11.5
  EXPECT_THROW(composite_time(seq, {}), std::invalid_argument);
}

TEST(Rewrite, ReplacesOccurrences) {
  auto seq = EventSequence::from_pairs({{"A", 4}, {"B", 10}, {"C", 11}, {"D", 12}, {"A", 30}});
  const auto& a = seq.alphabet();
  ParallelEpisode bcd({a.at("D"), a.at("B"), a.at("C")});
  auto out = rewrite_stream_detailed(seq, {tracked(bcd, {{1, 2, 3}})});
  const auto& rs = out.sequence;
  ASSERT_EQ(rs.size(), 3u);
  EXPECT_EQ(rs.alphabet().label(rs[1].type), "[B C D]");
  EXPECT_EQ(rs[1].time, 11);
  EXPECT_EQ(out.composites.at(0).members, (std::vector<std::size_t>{1, 2, 3}));
  // original types are kept in the alphabet, composite appended
  EXPECT_EQ(rs.alphabet().size(), a.size() + 1);
}

TEST(Rewrite, IdentityWithoutOccurrences) {
  auto seq = EventSequence::from_pairs({{"A", 4}, {"B", 10}});
  EXPECT_EQ(rewrite_stream(seq, {}), seq);
  ParallelEpisode ab({EventType{0}, EventType{1}});
  EXPECT_EQ(rewrite_stream(seq, {tracked(ab, {})}), seq);
}

TEST(Rewrite, ConservesEvents) {
  std::vector<std::pair<std::string, Tick>> ev;
  for (Tick t = 0; t < 300; t += 7) ev.push_back({"A", t}), ev.push_back({"B", t + 1}), ev.push_back({"C", t + 3});
  auto seq = EventSequence::from_pairs(ev);
  MiningConfig cfg;
  cfg.expiry = 1;
  cfg.track_occurrences = true;
  ParallelEpisode ab({EventType{0}, EventType{1}});
  auto c = count_parallel_expiry(std::span(&ab, 1), seq, cfg);
  auto out = rewrite_stream_detailed(seq, c);
  std::size_t replaced = 0;
  for (const auto& comp : out.composites) {
    replaced += comp.members.size();
    Tick lo = seq[comp.members.front()].time, hi = lo;
    for (auto m : comp.members) lo = std::min(lo, seq[m].time), hi = std::max(hi, seq[m].time);
    EXPECT_LE(lo, comp.time);
    EXPECT_GE(comp.time, lo);
    EXPECT_LE(comp.time, hi);
  }
  EXPECT_EQ(out.sequence.size(), seq.size() - replaced + out.composites.size());
}

TEST(Rewrite, OverlapIsAnError) {
  auto seq = EventSequence::from_pairs({{"A", 1}, {"B", 1}, {"C", 1}});
  ParallelEpisode ab({EventType{0}, EventType{1}});
  ParallelEpisode bc({EventType{1}, EventType{2}});
  EXPECT_THROW(rewrite_stream(seq, {tracked(ab, {{0, 1}}), tracked(bc, {{1, 2}})}), std::invalid_argument);
  EXPECT_THROW(rewrite_stream(seq, {tracked(ab, {{0, 9}})}), std::out_of_range);
}

TEST(Synfire, RecoversPlantedGroupChain) {
  // X at t, (A B) around t+5 with B jittered, Y at t+10
  std::vector<std::pair<std::string, Tick>> ev;
  for (Tick t = 0; t < 3000; t += 30) {
    ev.push_back({"X", t});
    ev.push_back({"A", t + 5});
    ev.push_back({"B", t + 5 - (t / 30) % 2});
    ev.push_back({"Y", t + 10});
    ev.push_back({"Z", t + 20});
  }
  auto seq = EventSequence::from_pairs(ev);
  MiningConfig cfg;
  cfg.expiry = 1;
  cfg.freq_threshold = 0.1;
  cfg.candidate_intervals = {{0, 2}, {2, 4}, {4, 6}};
  auto r = mine_synfire(seq, cfg);
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_EQ(to_string(r.groups[0], seq.alphabet()), "{A B} : 100");
  auto top = largest_frequent(r.serial);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(to_string(top[0].episode, r.rewritten.sequence.alphabet()), "X -(4,6]-> [A B] -(4,6]-> Y");
}

TEST(Synfire, NoGroupsLeavesStreamAlone) {
  auto seq = EventSequence::from_pairs({{"A", 1}, {"B", 5}, {"A", 11}, {"B", 15}});
  MiningConfig cfg;
  cfg.expiry = 1;
  cfg.freq_threshold = 0.5;
  cfg.candidate_intervals = {{2, 4}};
  auto r = mine_synfire(seq, cfg);
  EXPECT_TRUE(r.groups.empty());
  EXPECT_EQ(r.rewritten.sequence, seq);
  ASSERT_EQ(largest_frequent(r.serial).size(), 1u);
  cfg.candidate_intervals.clear();
  EXPECT_THROW(mine_synfire(seq, cfg), std::invalid_argument);
}

TEST(Synfire, FirstClaimWins) {
  // {A B} is more frequent than {B C}; the shared B events go to {A B}
  std::vector<std::pair<std::string, Tick>> ev;
  for (Tick t = 0; t < 400; t += 10) ev.push_back({"A", t}), ev.push_back({"B", t});
  for (Tick t = 0; t < 200; t += 10) ev.push_back({"C", t});
  auto seq = EventSequence::from_pairs(ev);
  MiningConfig cfg;
  cfg.expiry = 1;
  cfg.min_count = 10;
  cfg.track_occurrences = true;
  auto groups = select_groups(mine_parallel(seq, cfg), seq.size());
  ASSERT_FALSE(groups.empty());
  EXPECT_EQ(to_string(groups[0].episode, seq.alphabet()), "{A B C}");
  EXPECT_NO_THROW(rewrite_stream(seq, groups));
}
