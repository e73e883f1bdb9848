#include "credrank/compare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace credrank {

namespace {

void require_same_keys(const std::map<std::string, double>& a,
                       const std::map<std::string, double>& b) {
  if (a.size() != b.size()) throw KeyMismatch("compared lists cover different populations");
  auto ita = a.begin();
  auto itb = b.begin();
  for (; ita != a.end(); ++ita, ++itb)
    if (ita->first != itb->first)
      throw KeyMismatch("compared lists cover different populations ('" + ita->first + "' vs '" +
                        itb->first + "')");
}

// Average competition ranks (1-based) of a value vector.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t k = 0;
  while (k < n) {
    std::size_t j = k;
    while (j + 1 < n && values[order[j + 1]] == values[order[k]]) ++j;
    const double avg = 1.0 + 0.5 * static_cast<double>(k + j);
    for (std::size_t m = k; m <= j; ++m) ranks[order[m]] = avg;
    k = j + 1;
  }
  return ranks;
}

ShiftStats stats_of(const std::vector<double>& shifts) {
  ShiftStats stats;
  const double n = static_cast<double>(shifts.size());
  for (double s : shifts) {
    stats.mean += s;
    stats.max = std::max(stats.max, s);
  }
  stats.mean /= n;
  double variance = 0.0;
  for (double s : shifts) variance += (s - stats.mean) * (s - stats.mean);
  stats.stddev = std::sqrt(variance / n);
  return stats;
}

}  // namespace

std::optional<double> spearman(const std::map<std::string, double>& a,
                               const std::map<std::string, double>& b) {
  require_same_keys(a, b);
  const std::size_t n = a.size();
  if (n < 2) return std::nullopt;

  std::vector<double> va, vb;
  va.reserve(n);
  vb.reserve(n);
  for (const auto& [id, value] : a) {
    va.push_back(value);
    vb.push_back(b.at(id));
  }
  const auto ra = average_ranks(va);
  const auto rb = average_ranks(vb);

  const double mean = 0.5 * static_cast<double>(n + 1);  // mean rank on both sides
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double da = ra[k] - mean;
    const double db = rb[k] - mean;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return std::nullopt;  // a constant side: undefined
  return cov / std::sqrt(var_a * var_b);
}

ShiftDistribution shift_distribution(const std::map<std::string, double>& percentiles_a,
                                     const std::map<std::string, double>& percentiles_b,
                                     double bin_width) {
  if (!(bin_width > 0.0) || bin_width > 100.0)
    throw InvalidConfig("shift bin width must be in (0,100]");
  require_same_keys(percentiles_a, percentiles_b);
  if (percentiles_a.empty()) throw KeyMismatch("no observations to compare");

  std::vector<double> shifts;
  shifts.reserve(percentiles_a.size());
  for (const auto& [id, pa] : percentiles_a) shifts.push_back(std::abs(pa - percentiles_b.at(id)));

  const auto bin_count = static_cast<std::size_t>(std::ceil(100.0 / bin_width));
  std::vector<std::size_t> counts(bin_count, 0);
  for (double s : shifts) {
    std::size_t idx = 0;
    if (s > bin_width)
      idx = std::min(bin_count - 1,
                     static_cast<std::size_t>(std::ceil(s / bin_width)) - 1);
    ++counts[idx];
  }

  ShiftDistribution dist;
  dist.bins.reserve(bin_count);
  const double total = static_cast<double>(shifts.size());
  for (std::size_t k = 0; k < bin_count; ++k) {
    HistogramBin bin;
    bin.lo = bin_width * static_cast<double>(k);
    bin.hi = std::min(100.0, bin_width * static_cast<double>(k + 1));
    bin.share = static_cast<double>(counts[k]) / total;
    dist.bins.push_back(bin);
  }
  dist.stats = stats_of(shifts);
  return dist;
}

QuartileMatrix quartile_transition(const RankingList& a, const RankingList& b) {
  require_same_keys(a.percentiles, b.percentiles);
  QuartileMatrix matrix{};
  const double total = static_cast<double>(a.quartiles.size());
  for (const auto& [id, qa] : a.quartiles) {
    const int qb = b.quartiles.at(id);
    matrix[static_cast<std::size_t>(qa - 1)][static_cast<std::size_t>(qb - 1)] += 1.0 / total;
  }
  return matrix;
}

std::map<std::string, bool> selection_flags(const RankingList& list, ThresholdKind kind) {
  std::map<std::string, bool> flags;
  if (kind == ThresholdKind::Top10) {
    for (const auto& [id, pct] : list.percentiles) flags.emplace(id, pct >= 90.0);
    return flags;
  }
  std::vector<double> values;
  values.reserve(list.scores.size());
  for (const auto& [id, score] : list.scores) values.push_back(score);
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  const double median = (m % 2 == 1) ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
  // Strict inequality: sitting exactly at the median is not "above".
  for (const auto& [id, score] : list.scores) flags.emplace(id, score > median);
  return flags;
}

double retention_lost(const RankingList& a, const RankingList& b, ThresholdKind kind) {
  require_same_keys(a.percentiles, b.percentiles);
  const auto flags_a = selection_flags(a, kind);
  const auto flags_b = selection_flags(b, kind);
  std::size_t selected = 0, lost = 0;
  for (const auto& [id, in_a] : flags_a) {
    if (!in_a) continue;
    ++selected;
    if (!flags_b.at(id)) ++lost;
  }
  if (selected == 0) throw EmptySelection("no researcher selected under the source list");
  return static_cast<double>(lost) / static_cast<double>(selected);
}

std::vector<ResearcherStanding> flatten_rankings(const RankingSet& rankings,
                                                 const Corpus& corpus) {
  const auto index = corpus.researcher_index();

  std::map<std::string, ResearcherStanding> rows;
  for (const auto& [key, lists] : rankings.groups) {
    std::array<std::map<std::string, bool>, kIndicatorCount> top10, above;
    for (int k = 0; k < kIndicatorCount; ++k) {
      top10[static_cast<std::size_t>(k)] =
          selection_flags(lists[static_cast<std::size_t>(k)], ThresholdKind::Top10);
      above[static_cast<std::size_t>(k)] =
          selection_flags(lists[static_cast<std::size_t>(k)], ThresholdKind::AboveMedian);
    }
    for (const auto& [id, pct] : lists[0].percentiles) {
      auto it = index.find(id);
      if (it == index.end()) throw DanglingReference(id, "ranking lists");
      const auto& researcher = corpus.researchers[it->second];
      auto& row = rows[id];
      row.id = id;
      row.field_code = key.field_code;
      row.discipline_code = researcher.discipline_code;
      row.rank = key.rank;
      for (int k = 0; k < kIndicatorCount; ++k) {
        const auto& list = lists[static_cast<std::size_t>(k)];
        auto& standing = row.by_indicator[static_cast<std::size_t>(k)];
        standing.score = list.scores.at(id);
        standing.percentile = list.percentiles.at(id);
        standing.quartile = list.quartiles.at(id);
        standing.top10 = top10[static_cast<std::size_t>(k)].at(id);
        standing.above_median = above[static_cast<std::size_t>(k)].at(id);
      }
    }
  }

  std::vector<ResearcherStanding> out;
  out.reserve(rows.size());
  for (auto& [id, row] : rows) out.push_back(std::move(row));
  return out;
}

ComparisonReport compare_standings(const std::vector<const ResearcherStanding*>& rows,
                                   Indicator a, Indicator b, double bin_width,
                                   std::string scope_kind, std::string scope_id) {
  ComparisonReport report;
  report.a = a;
  report.b = b;
  report.scope_kind = std::move(scope_kind);
  report.scope_id = std::move(scope_id);
  report.observations = rows.size();

  const std::size_t ia = index_of(a);
  const std::size_t ib = index_of(b);

  std::map<std::string, double> pa, pb;
  for (const ResearcherStanding* row : rows) {
    pa.emplace(row->id, row->by_indicator[ia].percentile);
    pb.emplace(row->id, row->by_indicator[ib].percentile);
  }

  report.spearman = spearman(pa, pb);
  report.shifts = shift_distribution(pa, pb, bin_width);

  const double total = static_cast<double>(rows.size());
  for (const ResearcherStanding* row : rows) {
    const auto qa = static_cast<std::size_t>(row->by_indicator[ia].quartile - 1);
    const auto qb = static_cast<std::size_t>(row->by_indicator[ib].quartile - 1);
    report.quartile_matrix[qa][qb] += 1.0 / total;
  }

  auto lost_share = [&](bool IndicatorStanding::*flag) -> std::optional<double> {
    std::size_t selected = 0, lost = 0;
    for (const ResearcherStanding* row : rows) {
      if (!(row->by_indicator[ia].*flag)) continue;
      ++selected;
      if (!(row->by_indicator[ib].*flag)) ++lost;
    }
    if (selected == 0) return std::nullopt;
    return static_cast<double>(lost) / static_cast<double>(selected);
  };
  report.lost_top10 = lost_share(&IndicatorStanding::top10);
  report.lost_above_median = lost_share(&IndicatorStanding::above_median);
  return report;
}

DisciplineRollup make_rollup(const std::string& discipline,
                             const std::vector<ComparisonReport>& discipline_reports,
                             const std::vector<ComparisonReport>& field_reports) {
  DisciplineRollup rollup;
  rollup.discipline = discipline;

  for (const auto& pooled : discipline_reports) {
    PairRollup row;
    row.a = pooled.a;
    row.b = pooled.b;
    row.observations = pooled.observations;
    row.general_correlation = pooled.spearman;
    row.avg_shift = pooled.shifts.stats.mean;
    row.max_shift = pooled.shifts.stats.max;

    auto consider = [](std::optional<FieldExtreme>& slot, double value, const std::string& field,
                       bool want_max) {
      if (!slot || (want_max ? value > slot->value : value < slot->value))
        slot = FieldExtreme{value, field};
    };

    for (const auto& field : field_reports) {
      if (field.a != pooled.a || field.b != pooled.b) continue;
      if (field.spearman) {
        consider(row.max_correlation, *field.spearman, field.scope_id, true);
        consider(row.min_correlation, *field.spearman, field.scope_id, false);
      }
      consider(row.max_avg_shift, field.shifts.stats.mean, field.scope_id, true);
      consider(row.max_single_shift, field.shifts.stats.max, field.scope_id, true);
      consider(row.min_shift_stddev, field.shifts.stats.stddev, field.scope_id, false);
      consider(row.max_shift_stddev, field.shifts.stats.stddev, field.scope_id, true);
    }
    rollup.pairs.push_back(std::move(row));
  }
  return rollup;
}

}  // namespace credrank
