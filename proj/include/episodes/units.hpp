#pragma once

// Millisecond flags onto a tick grid. Values that do not land on a whole
// number of ticks are rejected instead of rounded.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "episodes/episode.hpp"
#include "episodes/spike_csv.hpp"

namespace episodes {

inline Tick ms_to_ticks(double ms, double tick_seconds) {
  if (!(tick_seconds > 0.0)) throw std::invalid_argument("tick length must be positive");
  const double ticks = ms * 1e-3 / tick_seconds;
  const double r = std::round(ticks);
  if (!std::isfinite(ticks) || std::abs(ticks - r) > 1e-9 * std::max(1.0, std::abs(r)))
    throw std::invalid_argument(csv_detail::format_double(ms) + " ms is not a whole number of " +
                                csv_detail::format_double(tick_seconds) + " s ticks");
  return static_cast<Tick>(r);
}

/// "a-b,c-d" in ms -> (a,b], (c,d] in ticks. Sorted by low; overlaps rejected.
inline std::vector<Interval> parse_interval_list(std::string_view text, double tick_seconds) {
  std::vector<Interval> out;
  if (csv_detail::trim(text).empty()) throw std::invalid_argument("empty interval list");
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto item = csv_detail::trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    auto dash = item.find('-', 1);
    if (dash == std::string_view::npos) throw std::invalid_argument("interval '" + std::string(item) + "' is not LOW-HIGH");
    auto lo = csv_detail::to_double(item.substr(0, dash));
    auto hi = csv_detail::to_double(item.substr(dash + 1));
    if (!lo || !hi) throw std::invalid_argument("interval '" + std::string(item) + "' is not LOW-HIGH");
    out.emplace_back(ms_to_ticks(*lo, tick_seconds), ms_to_ticks(*hi, tick_seconds));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  std::sort(out.begin(), out.end());
  MiningConfig check;
  check.candidate_intervals = out;
  check.validate_intervals();
  return out;
}

}  // namespace episodes
