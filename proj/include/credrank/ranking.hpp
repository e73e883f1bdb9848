#pragma once

#include <array>
#include <compare>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "credrank/scoring.hpp"
#include "credrank/types.hpp"

namespace credrank {

// Peer groups are field x academic rank: the only populations the indicators
// are comparable within.
struct PeerGroupKey {
  std::string field_code;
  AcademicRank rank = AcademicRank::Assistant;

  auto operator<=>(const PeerGroupKey&) const = default;
};

struct RankingList {
  Indicator indicator = Indicator::WFO;
  std::map<std::string, double> scores;       // researcher -> raw indicator value
  std::map<std::string, double> percentiles;  // 0 (worst) .. 100 (best)
  std::map<std::string, int> quartiles;       // 1 (best) .. 4 (worst)
};

// 0-100 worst-to-best scale: sort ascending, average competition rank for
// ties, percentile = 100*(avg_rank-1)/(N-1). Throws GroupTooSmall for N < 2.
std::map<std::string, double> percentile_rank(const std::map<std::string, double>& scores);

// Quartile from percentile: 1 for p >= 75, 2 for [50,75), 3 for [25,50),
// 4 below 25.
int quartile_of(double percentile);

struct SkippedGroup {
  PeerGroupKey key;
  std::size_t size = 0;
};

struct RankingSet {
  std::map<PeerGroupKey, std::array<RankingList, kIndicatorCount>> groups;
  std::vector<SkippedGroup> skipped;  // groups with fewer than 2 scored members
};

// Six ranking lists per peer group. Researchers without a scorecard do not
// rank; groups with fewer than 2 scored members are skipped and logged.
RankingSet build_rankings(const std::vector<ScoreCard>& cards, const Corpus& corpus);

// CSV export: field_code,rank,indicator,researcher_id,score,percentile,quartile,
// percentile descending, ties by researcher id.
void write_rankings(const RankingSet& rankings, std::ostream& out);
void write_rankings_file(const RankingSet& rankings, const std::string& path);

}  // namespace credrank
