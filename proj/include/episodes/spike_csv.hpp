#pragma once

// Spike CSV: optional '#' comment lines, then `label,seconds` data lines.
// Files written here carry two kinds of directive comments that the reader
// honours: `# tick_seconds=<value>` and one `# type=<label>` per alphabet
// entry, so that alphabet order survives a round trip.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "episodes/errors.hpp"
#include "episodes/event.hpp"

namespace episodes {

namespace csv_detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

constexpr std::string_view kTickDirective = "tick_seconds=";
constexpr std::string_view kTypeDirective = "type=";

}  // namespace csv_detail

/// Quantizes a time in seconds onto the tick grid.
inline Tick to_ticks(double seconds, double tick_seconds) {
  return static_cast<Tick>(std::llround(seconds / tick_seconds));
}

inline EventSequence parse_spike_stream(std::istream& in, double tick_seconds) {
  using namespace csv_detail;
  if (!(tick_seconds > 0.0)) throw std::invalid_argument("tick_seconds must be positive");

  std::vector<std::string> declared;
  std::vector<std::pair<std::string, Tick>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      auto body = trim(s.substr(1));
      if (body.starts_with(kTypeDirective)) declared.emplace_back(body.substr(kTypeDirective.size()));
      continue;
    }
    auto comma = s.rfind(',');
    if (comma == std::string_view::npos) throw FormatError("expected 'label,seconds'", line_no);
    auto label = trim(s.substr(0, comma));
    if (label.empty()) throw FormatError("empty event label", line_no);
    auto secs = to_double(s.substr(comma + 1));
    if (!secs) throw FormatError("bad time value '" + std::string(s.substr(comma + 1)) + "'", line_no);
    if (*secs < 0.0) throw FormatError("negative time", line_no);
    rows.emplace_back(std::string(label), to_ticks(*secs, tick_seconds));
  }

  Alphabet alpha;
  for (const auto& l : declared) alpha.intern(l);
  std::vector<std::string> seen;
  for (const auto& r : rows)
    if (!alpha.contains(r.first)) seen.push_back(r.first);
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (const auto& l : seen) alpha.intern(l);

  std::vector<Event> events;
  events.reserve(rows.size());
  for (const auto& [l, t] : rows) events.push_back(Event{alpha.at(l), t});
  return EventSequence(std::move(alpha), std::move(events), tick_seconds);
}

/// Reads a spike CSV, quantizing times to `round(seconds / tick_seconds)`.
/// Labels not declared by a `# type=` directive are interned in sorted order.
inline EventSequence parse_spike_file(const std::string& path, double tick_seconds) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return parse_spike_stream(in, tick_seconds);
}

/// Returns the `# tick_seconds=` directive of a spike file, if any.
inline std::optional<double> read_tick_seconds_hint(const std::string& path) {
  using namespace csv_detail;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  while (std::getline(in, line)) {
    auto s = trim(line);
    if (s.empty()) continue;
    if (s.front() != '#') break;
    auto body = trim(s.substr(1));
    if (body.starts_with(kTickDirective)) {
      auto v = to_double(body.substr(kTickDirective.size()));
      if (v && *v > 0.0) return v;
    }
  }
  return std::nullopt;
}

inline void write_spike_stream(const EventSequence& seq, std::ostream& out) {
  using namespace csv_detail;
  for (const auto& l : seq.alphabet().labels()) {
    if (l.empty() || l.find_first_of(",\n\r") != std::string::npos || l.front() == '#' ||
        trim(l).size() != l.size())
      throw std::invalid_argument("label '" + l + "' cannot be written to CSV");
  }
  out << "# spike csv: label,seconds\n";
  out << "# " << kTickDirective << format_double(seq.tick_seconds()) << '\n';
  for (const auto& l : seq.alphabet().labels()) out << "# " << kTypeDirective << l << '\n';
  for (const auto& e : seq) {
    out << seq.alphabet().label(e.type) << ','
        << format_double(static_cast<double>(e.time) * seq.tick_seconds()) << '\n';
  }
}

inline void write_spike_file(const EventSequence& seq, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_spike_stream(seq, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace episodes
