#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "credrank/credit.hpp"
#include "credrank/types.hpp"

namespace credrank {

// Per-cell citation baselines: (year, subject category) -> median citation
// count over publications with at least one citation. Cells whose
// publications are all uncited have no entry.
struct BaselineTable {
  std::map<std::pair<int, std::string>, double> medians;

  std::optional<double> lookup(int year, const std::string& category) const;

  static BaselineTable from_csv_file(const std::string& path);
  void write_csv(std::ostream& out) const;
  void write_csv_file(const std::string& path) const;
};

BaselineTable build_baselines(const Corpus& corpus);

// Citation count scaled by the per-category baselines: the weighted average
// of citations/median over the publication's subject categories. Uncited
// publications score 0 regardless of baseline coverage; otherwise a missing
// cell raises MissingBaseline.
double normalized_impact(const Publication& pub, const BaselineTable& baselines);

// The six per-year productivity values for one researcher.
struct ScoreCard {
  std::string researcher_id;
  double wfo = 0.0;  // weighted fractional output
  double fo = 0.0;   // fractional output
  double o = 0.0;    // output (full counting)
  double wfi = 0.0;  // weighted fractional impact
  double fi = 0.0;   // fractional impact
  double i = 0.0;    // impact (full counting)

  double value(Indicator ind) const;
};

// Evaluates all six indicators for every researcher with at least one
// publication. Sums run in ascending publication id order; cards come back
// in ascending researcher id order.
std::vector<ScoreCard> score_all(const Corpus& corpus, const BaselineTable& baselines,
                                 const WeightScheme& scheme = {});

void write_scorecards(const std::vector<ScoreCard>& cards, std::ostream& out);
void write_scorecards_file(const std::vector<ScoreCard>& cards, const std::string& path);

}  // namespace credrank
