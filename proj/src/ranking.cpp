#include "credrank/ranking.hpp"

#include <algorithm>
#include <fstream>

#include "credrank/csv.hpp"

namespace credrank {

std::map<std::string, double> percentile_rank(const std::map<std::string, double>& scores) {
  const std::size_t n = scores.size();
  if (n < 2) throw GroupTooSmall(n);

  std::vector<std::pair<double, const std::string*>> order;
  order.reserve(n);
  for (const auto& [id, score] : scores) order.emplace_back(score, &id);
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::map<std::string, double> percentiles;
  const double span = static_cast<double>(n - 1);
  std::size_t k = 0;
  while (k < n) {
    std::size_t j = k;
    while (j + 1 < n && order[j + 1].first == order[k].first) ++j;
    // 1-based average competition rank over the tied block [k, j].
    const double avg_rank = 1.0 + 0.5 * static_cast<double>(k + j);
    const double pct = 100.0 * (avg_rank - 1.0) / span;
    for (std::size_t m = k; m <= j; ++m) percentiles.emplace(*order[m].second, pct);
    k = j + 1;
  }
  return percentiles;
}

int quartile_of(double percentile) {
  if (percentile >= 75.0) return 1;
  if (percentile >= 50.0) return 2;
  if (percentile >= 25.0) return 3;
  return 4;
}

RankingSet build_rankings(const std::vector<ScoreCard>& cards, const Corpus& corpus) {
  const auto index = corpus.researcher_index();

  std::map<PeerGroupKey, std::vector<const ScoreCard*>> members;
  for (const auto& card : cards) {
    auto it = index.find(card.researcher_id);
    if (it == index.end())
      throw DanglingReference(card.researcher_id, "scorecards");
    const auto& researcher = corpus.researchers[it->second];
    members[{researcher.field_code, researcher.rank}].push_back(&card);
  }

  RankingSet set;
  for (const auto& [key, group] : members) {
    if (group.size() < 2) {
      set.skipped.push_back({key, group.size()});
      continue;
    }
    auto& lists = set.groups[key];
    for (int k = 0; k < kIndicatorCount; ++k) {
      const auto ind = static_cast<Indicator>(k);
      RankingList list;
      list.indicator = ind;
      for (const ScoreCard* card : group) list.scores.emplace(card->researcher_id, card->value(ind));
      list.percentiles = percentile_rank(list.scores);
      for (const auto& [id, pct] : list.percentiles) list.quartiles.emplace(id, quartile_of(pct));
      lists[static_cast<std::size_t>(k)] = std::move(list);
    }
  }
  return set;
}

void write_rankings(const RankingSet& rankings, std::ostream& out) {
  out << "field_code,rank,indicator,researcher_id,score,percentile,quartile\n";
  for (const auto& [key, lists] : rankings.groups) {
    for (const auto& list : lists) {
      std::vector<const std::string*> ids;
      ids.reserve(list.percentiles.size());
      for (const auto& [id, pct] : list.percentiles) ids.push_back(&id);
      std::sort(ids.begin(), ids.end(), [&](const std::string* a, const std::string* b) {
        const double pa = list.percentiles.at(*a);
        const double pb = list.percentiles.at(*b);
        if (pa != pb) return pa > pb;
        return *a < *b;
      });
      for (const std::string* id : ids) {
        out << csv::join({key.field_code, to_string(key.rank), to_string(list.indicator), *id,
                          csv::number(list.scores.at(*id)), csv::number(list.percentiles.at(*id)),
                          std::to_string(list.quartiles.at(*id))})
            << "\n";
      }
    }
  }
}

void write_rankings_file(const RankingSet& rankings, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_rankings(rankings, out);
}

}  // namespace credrank
