#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "credrank/ranking.hpp"
#include "credrank/types.hpp"

namespace credrank {

// Spearman rank correlation with average-rank ties over paired values.
// Returns nullopt when either side is constant (or fewer than 2 pairs), the
// explicit not-a-value the reports serialize as null.
std::optional<double> spearman(const std::map<std::string, double>& a,
                               const std::map<std::string, double>& b);

struct ShiftStats {
  double mean = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // population standard deviation
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  double share = 0.0;
};

struct ShiftDistribution {
  std::vector<HistogramBin> bins;  // [0,w] then (w,2w] ... up to 100
  ShiftStats stats;
};

// Distribution of |percentile_a - percentile_b| per researcher. The first
// bin is closed on both ends, later bins are half-open.
ShiftDistribution shift_distribution(const std::map<std::string, double>& percentiles_a,
                                     const std::map<std::string, double>& percentiles_b,
                                     double bin_width = 5.0);

// quartile_matrix[qa-1][qb-1] = share of researchers in quartile qa under a
// and qb under b. Entries sum to 1.
using QuartileMatrix = std::array<std::array<double, 4>, 4>;

QuartileMatrix quartile_transition(const RankingList& a, const RankingList& b);

enum class ThresholdKind { Top10, AboveMedian };

// Selected-subgroup membership under one list: Top10 means percentile >= 90,
// AboveMedian means raw score strictly above the group median score.
std::map<std::string, bool> selection_flags(const RankingList& list, ThresholdKind kind);

// Share of the subgroup selected under `a` that is no longer selected under
// `b`. Throws EmptySelection when nobody is selected under `a`.
double retention_lost(const RankingList& a, const RankingList& b, ThresholdKind kind);

// ---------------------------------------------------------------------------
// Pooled comparisons. Percentiles, quartiles and subgroup flags are always
// evaluated within a researcher's own peer group; pooling just aggregates
// the per-group outcomes over a wider population.

struct IndicatorStanding {
  double score = 0.0;
  double percentile = 0.0;
  int quartile = 4;
  bool top10 = false;
  bool above_median = false;
};

struct ResearcherStanding {
  std::string id;
  std::string field_code;
  std::string discipline_code;
  AcademicRank rank = AcademicRank::Assistant;
  std::array<IndicatorStanding, kIndicatorCount> by_indicator;
};

// One row per researcher appearing in a ranked peer group, ascending id.
std::vector<ResearcherStanding> flatten_rankings(const RankingSet& rankings, const Corpus& corpus);

struct ComparisonReport {
  Indicator a = Indicator::WFO;
  Indicator b = Indicator::WFO;
  std::string scope_kind;  // "field" | "discipline" | "total"
  std::string scope_id;    // empty for total
  std::size_t observations = 0;
  std::optional<double> spearman;
  ShiftDistribution shifts;
  QuartileMatrix quartile_matrix{};
  std::optional<double> lost_top10;        // null when nobody selected under a
  std::optional<double> lost_above_median;
};

ComparisonReport compare_standings(const std::vector<const ResearcherStanding*>& rows,
                                   Indicator a, Indicator b, double bin_width,
                                   std::string scope_kind, std::string scope_id);

struct FieldExtreme {
  double value = 0.0;
  std::string field_code;
};

// One rollup row block per indicator pair, mirroring the per-discipline
// structure of the correlation and shift-statistics tables.
struct PairRollup {
  Indicator a = Indicator::WFO;
  Indicator b = Indicator::WFO;
  std::size_t observations = 0;
  std::optional<double> general_correlation;  // pooled over the discipline
  std::optional<FieldExtreme> max_correlation;
  std::optional<FieldExtreme> min_correlation;
  double avg_shift = 0.0;  // pooled mean |percentile delta|
  double max_shift = 0.0;  // pooled max
  std::optional<FieldExtreme> max_avg_shift;
  std::optional<FieldExtreme> max_single_shift;
  std::optional<FieldExtreme> min_shift_stddev;
  std::optional<FieldExtreme> max_shift_stddev;
};

struct DisciplineRollup {
  std::string discipline;
  std::vector<PairRollup> pairs;
};

// discipline_reports: one report per pair at discipline scope.
// field_reports: reports of this discipline's fields, any pair order.
DisciplineRollup make_rollup(const std::string& discipline,
                             const std::vector<ComparisonReport>& discipline_reports,
                             const std::vector<ComparisonReport>& field_reports);

}  // namespace credrank
