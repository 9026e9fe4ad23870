#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace episodes {

/// Time in integer ticks. One tick is `EventSequence::tick_seconds()` seconds.
using Tick = std::int64_t;

/// Interned event label. Ids are only meaningful relative to the Alphabet
/// that issued them.
struct EventType {
  std::uint32_t id = 0;

  friend constexpr auto operator<=>(EventType, EventType) = default;
};

struct Event {
  EventType type;
  Tick time = 0;

  friend constexpr bool operator==(const Event&, const Event&) = default;
};

/// Bidirectional map between labels and EventType ids.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(const std::vector<std::string>& labels) {
    for (const auto& l : labels) intern(l);
  }

  EventType intern(std::string_view label) {
    auto it = index_.find(std::string(label));
    if (it != index_.end()) return EventType{it->second};
    auto id = static_cast<std::uint32_t>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), id);
    return EventType{id};
  }

  [[nodiscard]] bool contains(std::string_view label) const {
    return index_.count(std::string(label)) != 0;
  }

  [[nodiscard]] bool contains(EventType t) const { return t.id < labels_.size(); }

  [[nodiscard]] EventType at(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end())
      throw std::out_of_range("unknown event type '" + std::string(label) + "'");
    return EventType{it->second};
  }

  [[nodiscard]] const std::string& label(EventType t) const { return labels_.at(t.id); }

  [[nodiscard]] std::size_t size() const { return labels_.size(); }

  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }

  [[nodiscard]] std::vector<EventType> types() const {
    std::vector<EventType> out;
    out.reserve(labels_.size());
    for (std::uint32_t i = 0; i < labels_.size(); ++i) out.push_back(EventType{i});
    return out;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// A single time-ordered stream of typed events. Immutable once built.
///
/// Events are stably sorted by tick on construction, so simultaneous events
/// keep the order they were supplied in.
class EventSequence {
 public:
  EventSequence() = default;

  EventSequence(Alphabet alphabet, std::vector<Event> events, double tick_seconds = 1e-3)
      : alphabet_(std::move(alphabet)), events_(std::move(events)), tick_seconds_(tick_seconds) {
    if (!(tick_seconds_ > 0.0)) throw std::invalid_argument("tick_seconds must be positive");
    for (const auto& e : events_) {
      if (e.time < 0) throw std::invalid_argument("event time must be non-negative");
      if (!alphabet_.contains(e.type)) throw std::invalid_argument("event type outside alphabet");
    }
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.time < b.time; });
  }

  /// Convenience for tests and small literals: {("A", 1), ("B", 3), ...}.
  static EventSequence from_pairs(const std::vector<std::pair<std::string, Tick>>& pairs,
                                  double tick_seconds = 1e-3) {
    Alphabet alpha;
    std::vector<std::string> labels;
    for (const auto& p : pairs) labels.push_back(p.first);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (const auto& l : labels) alpha.intern(l);
    std::vector<Event> evs;
    evs.reserve(pairs.size());
    for (const auto& [l, t] : pairs) evs.push_back(Event{alpha.at(l), t});
    return EventSequence(std::move(alpha), std::move(evs), tick_seconds);
  }

  [[nodiscard]] const Alphabet& alphabet() const { return alphabet_; }
  [[nodiscard]] const std::vector<Event>& events() const { return events_; }
  [[nodiscard]] const Event& operator[](std::size_t i) const { return events_[i]; }
  [[nodiscard]] std::size_t size() const { return events_.size(); }
  [[nodiscard]] bool empty() const { return events_.empty(); }
  [[nodiscard]] double tick_seconds() const { return tick_seconds_; }

  [[nodiscard]] auto begin() const { return events_.begin(); }
  [[nodiscard]] auto end() const { return events_.end(); }

  /// Number of events of each type, indexed by type id.
  [[nodiscard]] std::vector<std::size_t> type_counts() const {
    std::vector<std::size_t> counts(alphabet_.size(), 0);
    for (const auto& e : events_) ++counts[e.type.id];
    return counts;
  }

  friend bool operator==(const EventSequence& a, const EventSequence& b) {
    return a.tick_seconds_ == b.tick_seconds_ && a.alphabet_ == b.alphabet_ &&
           a.events_ == b.events_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Event> events_;
  double tick_seconds_ = 1e-3;
};

}  // namespace episodes
