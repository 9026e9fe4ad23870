#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "episodes/episodes.hpp"

using namespace episodes;

namespace {

EventType T(std::uint32_t id) { return EventType{id}; }

SerialEpisode chain(std::vector<std::uint32_t> ids, Interval iv = {0, 5}) {
  std::vector<EventType> types;
  for (auto i : ids) types.push_back(T(i));
  return SerialEpisode(types, std::vector<Interval>(ids.size() - 1, iv));
}

ParallelEpisode group(std::vector<std::uint32_t> ids) {
  std::vector<EventType> types;
  for (auto i : ids) types.push_back(T(i));
  return ParallelEpisode(types);
}

// subsequence test by trying every index subset
bool brute_subsequence(const std::vector<EventType>& beta, const std::vector<EventType>& alpha) {
  const std::size_t n = alpha.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<EventType> pick;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) pick.push_back(alpha[i]);
    if (pick == beta) return true;
  }
  return false;
}

}  // namespace

TEST(Interval, LeftOpenRightClosed) {
  Interval iv(2, 4);
  EXPECT_FALSE(iv.contains(2));
  EXPECT_TRUE(iv.contains(3));
  EXPECT_TRUE(iv.contains(4));
  EXPECT_FALSE(iv.contains(5));
  EXPECT_FALSE(Interval(0, 1).contains(0));
  EXPECT_THROW(Interval(3, 3), std::invalid_argument);
  EXPECT_THROW(Interval(-1, 3), std::invalid_argument);
}

TEST(SerialEpisode, ShapeChecks) {
  EXPECT_THROW(SerialEpisode({T(0), T(1)}, {}), std::invalid_argument);
  EXPECT_THROW(SerialEpisode({}, {}), std::invalid_argument);
  auto ep = chain({0, 1, 0});
  EXPECT_EQ(ep.size(), 3u);
  EXPECT_EQ(ep.max_span(), 10);
}

TEST(ParallelEpisode, MultisetNormalized) {
  auto a = group({2, 0, 2});
  EXPECT_EQ(a, group({0, 2, 2}));
  auto m = a.multiplicities();
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[1].second, 2u);
}

TEST(Subepisode, Examples) {
  EXPECT_TRUE(is_subepisode(chain({0, 1}), chain({0, 1, 2})));
  EXPECT_FALSE(is_subepisode(chain({1, 0}), chain({0, 1, 2})));
  EXPECT_TRUE(is_subepisode(chain({0, 1, 2}), chain({0, 1, 2})));
  EXPECT_TRUE(is_subepisode(group({0, 2}), group({0, 1, 2})));
  EXPECT_FALSE(is_subepisode(group({0, 0}), group({0, 1})));
  EXPECT_THROW(is_subepisode(AnyEpisode{chain({0, 1})}, AnyEpisode{group({0, 1})}), std::invalid_argument);
}

TEST(Subepisode, RandomSerialMatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint32_t> type(0, 2);
  std::uniform_int_distribution<std::size_t> len(1, 5);
  for (int it = 0; it < 2000; ++it) {
    std::vector<std::uint32_t> a(len(rng)), b(std::min<std::size_t>(len(rng), 3));
    for (auto& x : a) x = type(rng);
    for (auto& x : b) x = type(rng);
    auto ea = a.size() > 1 ? chain(a) : SerialEpisode(T(a[0]));
    auto eb = b.size() > 1 ? chain(b) : SerialEpisode(T(b[0]));
    EXPECT_EQ(is_subepisode(eb, ea), brute_subsequence(eb.types(), ea.types()));
  }
}

TEST(Threshold, CeilOfFraction) {
  MiningConfig cfg;
  cfg.freq_threshold = 0.01;
  EXPECT_EQ(cfg.count_threshold(25000), 250u);
  EXPECT_EQ(cfg.count_threshold(25001), 251u);
  cfg.freq_threshold = 0.07;  // 0.07 * 100 is 7.000000000000001 in binary
  EXPECT_EQ(cfg.count_threshold(100), 7u);
  cfg.min_count = 3;
  EXPECT_EQ(cfg.count_threshold(100), 3u);
}

TEST(MiningConfig, IntervalListValidation) {
  MiningConfig cfg;
  cfg.candidate_intervals = {{0, 2}, {2, 4}};
  EXPECT_NO_THROW(cfg.validate_intervals());
  cfg.candidate_intervals = {{0, 3}, {2, 4}};
  EXPECT_THROW(cfg.validate_intervals(), std::invalid_argument);
  cfg.candidate_intervals = {{2, 4}, {0, 2}};
  EXPECT_THROW(cfg.validate_intervals(), std::invalid_argument);
}

TEST(Render, SerialAndParallel) {
  auto seq = EventSequence::from_pairs({{"A", 0}, {"B", 1}});
  SerialEpisode ep({T(0), T(1)}, {Interval(4, 6)});
  EXPECT_EQ(to_string(ep, seq.alphabet()), "A -(4,6]-> B");
  EXPECT_EQ(to_string(ParallelCount{group({1, 0}), 7, {}, 0}, seq.alphabet()), "{A B} : 7");
}

TEST(TrackOccurrences, RequiresTracking) {
  SerialCount c{chain({0, 1}), 0, std::nullopt, 0};
  EXPECT_THROW(track_occurrences(c), std::logic_error);
  c.occurrences.emplace();
  EXPECT_TRUE(track_occurrences(c).empty());
}

// ---------------------------------------------------------------------------

TEST(SerialCandidates, WorkedJoin) {
  SerialEpisode ab({T(0), T(1)}, {Interval(0, 5)});
  SerialEpisode bc({T(1), T(2)}, {Interval(5, 10)});
  auto out = generate_serial_candidates({ab, bc});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], SerialEpisode({T(0), T(1), T(2)}, {Interval(0, 5), Interval(5, 10)}));
}

TEST(SerialCandidates, IntervalIsPartOfTheOverlap) {
  SerialEpisode abc({T(0), T(1), T(2)}, {Interval(0, 5), Interval(0, 5)});
  SerialEpisode bcd_far({T(1), T(2), T(3)}, {Interval(5, 10), Interval(0, 5)});
  SerialEpisode bcd_near({T(1), T(2), T(3)}, {Interval(0, 5), Interval(0, 5)});
  EXPECT_TRUE(generate_serial_candidates({abc, bcd_far}).empty());
  EXPECT_EQ(generate_serial_candidates({abc, bcd_near}).size(), 1u);
  EXPECT_THROW(generate_serial_candidates({abc, SerialEpisode(T(0))}), std::invalid_argument);
}

TEST(SerialCandidates, BootstrapCounts) {
  Alphabet two({"A", "B"});
  auto l2 = generate_serial_candidates(bootstrap_serial(two), {Interval(0, 5)});
  ASSERT_EQ(l2.size(), 4u);
  for (const auto& e : l2) EXPECT_EQ(e.interval(0), Interval(0, 5));

  Alphabet alpha;
  for (int i = 0; i < 26; ++i) alpha.intern(std::string(1, static_cast<char>('A' + i)));
  auto l1 = bootstrap_serial(alpha);
  EXPECT_EQ(l1.size(), 26u);
  EXPECT_EQ(generate_serial_candidates(l1, {Interval(0, 5)}).size(), 676u);
  EXPECT_EQ(generate_serial_candidates(l1, {{0, 2}, {2, 4}, {4, 6}, {6, 8}, {8, 10}}).size(), 3380u);
}

TEST(SerialCandidates, RandomMatchesQuadraticJoin) {
  std::mt19937_64 rng(17);
  const std::vector<Interval> ivs{{0, 2}, {2, 4}};
  std::uniform_int_distribution<std::uint32_t> type(0, 2);
  std::uniform_int_distribution<std::size_t> pick(0, 1);
  for (int it = 0; it < 200; ++it) {
    const std::size_t k = 2 + it % 2;
    std::set<SerialEpisode> level;
    for (int n = 0; n < 15; ++n) {
      std::vector<EventType> types(k);
      std::vector<Interval> iv(k - 1);
      for (auto& t : types) t = T(type(rng));
      for (auto& x : iv) x = ivs[pick(rng)];
      level.emplace(types, iv);
    }
    std::set<SerialEpisode> want;
    for (const auto& a : level)
      for (const auto& b : level) {
        bool join = true;
        for (std::size_t i = 1; i < k; ++i) join = join && a.type(i) == b.type(i - 1);
        for (std::size_t i = 1; i + 1 < k; ++i) join = join && a.interval(i) == b.interval(i - 1);
        if (!join) continue;
        auto types = a.types();
        types.push_back(b.types().back());
        auto iv = a.intervals();
        iv.push_back(b.intervals().back());
        want.emplace(types, iv);
      }
    auto got = generate_serial_candidates({level.begin(), level.end()});
    EXPECT_EQ(std::set<SerialEpisode>(got.begin(), got.end()), want);
  }
}

TEST(ParallelCandidates, Examples) {
  EXPECT_TRUE(generate_parallel_candidates({group({0, 1}), group({0, 2})}).empty());
  auto out = generate_parallel_candidates({group({0, 1}), group({0, 2}), group({1, 2})});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], group({0, 1, 2}));
  // {C E} and {D F} share no prefix
  EXPECT_TRUE(generate_parallel_candidates({group({2, 4}), group({3, 5})}).empty());
  EXPECT_EQ(generate_parallel_candidates({group({0})}), std::vector{group({0, 0})});
}

TEST(ParallelCandidates, RandomMatchesExhaustiveSubsetCheck) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::uint32_t> type(0, 3);
  for (int it = 0; it < 300; ++it) {
    const std::size_t k = 1 + it % 3;
    std::set<std::vector<EventType>> level;
    for (int n = 0; n < 8; ++n) {
      std::vector<EventType> types(k);
      for (auto& t : types) t = T(type(rng));
      level.insert(ParallelEpisode(types).types());
    }
    // every sorted (k+1)-multiset over 4 types whose k-sub-multisets are all in the level
    std::set<ParallelEpisode> want;
    std::vector<EventType> cur;
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t from) {
      if (cur.size() == k + 1) {
        for (std::size_t d = 0; d <= k; ++d) {
          auto sub = cur;
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(d));
          if (!level.count(sub)) return;
        }
        want.emplace(cur);
        return;
      }
      for (std::uint32_t t = from; t < 4; ++t) {
        cur.push_back(T(t));
        rec(t);
        cur.pop_back();
      }
    };
    rec(0);
    std::vector<ParallelEpisode> in;
    for (const auto& l : level) in.emplace_back(l);
    auto got = generate_parallel_candidates(in);
    EXPECT_EQ(std::set<ParallelEpisode>(got.begin(), got.end()), want);
  }
}
