#pragma once

// Plain-text results tables: one summary row (largest size reached and the
// episodes of that size), then every level with its frequent episodes.

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "episodes/episode.hpp"
#include "episodes/event.hpp"

namespace episodes {

struct ReportHeader {
  std::string kind;
  std::string input;
  /// Constraint column, e.g. "expiry 1 ms" or "intervals 4-6 ms".
  std::string constraint;
  double threshold = 0.0;
  std::size_t threshold_count = 0;
  std::size_t events = 0;
  bool timing = true;
};

namespace report_detail {

inline std::string seconds(double s, bool timing) {
  if (!timing) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << s;
  return os.str();
}

}  // namespace report_detail

template <typename Episode>
std::string format_results(const ReportHeader& h, const MiningResult<Episode>& r, const Alphabet& alpha,
                           std::optional<std::size_t> per_level_limit = std::nullopt) {
  std::ostringstream os;
  double total = 0.0;
  for (const auto& l : r) total += l.seconds;
  const auto top = largest_frequent(r);
  const std::size_t size = top.empty() ? 0 : top.front().episode.size();

  os << "# kind: " << h.kind << '\n'
     << "# input: " << h.input << '\n'
     << "# events: " << h.events << '\n'
     << "# threshold: " << h.threshold << " (count >= " << h.threshold_count << ")\n"
     << "# serial intervals are printed in ticks as (low,high]\n";
  const int cw = std::max(24, static_cast<int>(h.constraint.size()) + 2);
  os << std::left << std::setw(cw) << "Constraint" << std::setw(10) << "Freq.Th." << std::setw(11)
     << "Time(sec)" << std::setw(11) << "Size(No.)" << "Patterns\n";
  const std::string size_col = std::to_string(size) + "(" + std::to_string(top.size()) + ")";
  if (top.empty()) {
    os << std::setw(cw) << h.constraint << std::setw(10) << h.threshold << std::setw(11)
       << report_detail::seconds(total, h.timing) << std::setw(11) << size_col << "no frequent episodes\n";
  }
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (i == 0)
      os << std::setw(cw) << h.constraint << std::setw(10) << h.threshold << std::setw(11)
         << report_detail::seconds(total, h.timing) << std::setw(11) << size_col;
    else
      os << std::setw(cw + 32) << "";
    os << to_string(top[i], alpha) << '\n';
  }

  for (const auto& l : r) {
    os << "\n[size " << l.size << "] candidates " << l.candidates << ", frequent " << l.frequent.size()
       << ", time " << report_detail::seconds(l.seconds, h.timing) << " s\n";
    const std::size_t n = per_level_limit ? std::min(*per_level_limit, l.frequent.size()) : l.frequent.size();
    for (std::size_t i = 0; i < n; ++i) os << "  " << to_string(l.frequent[i], alpha) << '\n';
    if (n < l.frequent.size()) os << "  ... " << (l.frequent.size() - n) << " more\n";
  }
  return os.str();
}

}  // namespace episodes
