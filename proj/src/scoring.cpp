#include "credrank/scoring.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>

#include "credrank/csv.hpp"

namespace credrank {

std::optional<double> BaselineTable::lookup(int year, const std::string& category) const {
  auto it = medians.find({year, category});
  if (it == medians.end()) return std::nullopt;
  return it->second;
}

BaselineTable BaselineTable::from_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file", path);
  long line_no = 0;
  std::vector<std::string> fields;
  // Tolerate leading "# ..." metadata lines so pipeline output can be re-fed.
  bool have_header = false;
  while ((have_header = csv::read_record(in, fields, path, line_no)))
    if (fields.empty() || fields[0].rfind('#', 0) != 0) break;
  if (!have_header || fields != std::vector<std::string>{"year", "category", "median"})
    throw ParseError("bad header, expected 'year,category,median'", path, line_no);

  BaselineTable table;
  while (csv::read_record(in, fields, path, line_no)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 3) throw ParseError("expected 3 fields", path, line_no);
    int year = 0;
    double median = 0.0;
    try {
      year = std::stoi(fields[0]);
      median = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw ParseError("invalid numeric field", path, line_no);
    }
    if (!(median >= 1.0)) throw ParseError("median must be >= 1", path, line_no);
    if (!table.medians.emplace(std::make_pair(year, fields[1]), median).second)
      throw ParseError("duplicate (year,category) cell", path, line_no);
  }
  return table;
}

void BaselineTable::write_csv(std::ostream& out) const {
  out << "year,category,median\n";
  for (const auto& [cell, median] : medians)
    out << csv::join({std::to_string(cell.first), cell.second, csv::number(median)}) << "\n";
}

void BaselineTable::write_csv_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_csv(out);
}

BaselineTable build_baselines(const Corpus& corpus) {
  // Cited-only: the skewed tail of uncited publications must not drag the
  // scaling median down.
  std::map<std::pair<int, std::string>, std::vector<std::int64_t>> cells;
  for (const auto& pub : corpus.publications) {
    if (pub.citations < 1) continue;
    for (const auto& share : pub.categories)
      cells[{pub.year, share.name}].push_back(pub.citations);
  }

  BaselineTable table;
  for (auto& [cell, counts] : cells) {
    std::sort(counts.begin(), counts.end());
    const std::size_t m = counts.size();
    const double median = (m % 2 == 1)
                              ? static_cast<double>(counts[m / 2])
                              : 0.5 * (static_cast<double>(counts[m / 2 - 1]) +
                                       static_cast<double>(counts[m / 2]));
    table.medians.emplace(cell, median);
  }
  return table;
}

double normalized_impact(const Publication& pub, const BaselineTable& baselines) {
  if (pub.citations == 0) return 0.0;
  double value = 0.0;
  for (const auto& share : pub.categories) {
    auto median = baselines.lookup(pub.year, share.name);
    if (!median) throw MissingBaseline(pub.year, share.name);
    value += share.weight * (static_cast<double>(pub.citations) / *median);
  }
  return value;
}

double ScoreCard::value(Indicator ind) const {
  switch (ind) {
    case Indicator::WFO: return wfo;
    case Indicator::FO: return fo;
    case Indicator::O: return o;
    case Indicator::WFI: return wfi;
    case Indicator::FI: return fi;
    case Indicator::I: return i;
  }
  return 0.0;
}

std::vector<ScoreCard> score_all(const Corpus& corpus, const BaselineTable& baselines,
                                 const WeightScheme& scheme) {
  const auto index = corpus.researcher_index();

  std::vector<const Publication*> pubs;
  pubs.reserve(corpus.publications.size());
  for (const auto& pub : corpus.publications) pubs.push_back(&pub);
  std::sort(pubs.begin(), pubs.end(),
            [](const Publication* a, const Publication* b) { return a->id < b->id; });

  struct Sums {
    double wfo = 0, fo = 0, o = 0, wfi = 0, fi = 0, i = 0;
    bool any = false;
  };
  std::map<std::string, Sums> acc;

  for (const Publication* pub : pubs) {
    const auto weighted = allocate(pub->byline, CountingRegime::Weighted, scheme);
    const double fractional = 1.0 / static_cast<double>(pub->byline.size());
    const double impact = normalized_impact(*pub, baselines);
    for (const auto& slot : pub->byline) {
      if (!slot.researcher_id) continue;
      auto it = index.find(*slot.researcher_id);
      if (it == index.end())
        throw DanglingReference(*slot.researcher_id, "publication '" + pub->id + "'");
      auto& sums = acc[*slot.researcher_id];
      const double w = weighted[static_cast<std::size_t>(slot.position) - 1];
      sums.wfo += w;
      sums.fo += fractional;
      sums.o += 1.0;
      sums.wfi += impact * w;
      sums.fi += impact * fractional;
      sums.i += impact;
      sums.any = true;
    }
  }

  std::vector<ScoreCard> cards;
  cards.reserve(acc.size());
  for (const auto& [id, sums] : acc) {
    if (!sums.any) continue;
    const auto& researcher = corpus.researchers[index.at(id)];
    const double t = static_cast<double>(researcher.years_active);
    ScoreCard card;
    card.researcher_id = id;
    card.wfo = sums.wfo / t;
    card.fo = sums.fo / t;
    card.o = sums.o / t;
    card.wfi = sums.wfi / t;
    card.fi = sums.fi / t;
    card.i = sums.i / t;
    assert(card.o >= card.fo && card.o >= card.wfo);
    assert(card.i >= card.fi && card.i >= card.wfi);
    cards.push_back(std::move(card));
  }
  return cards;
}

void write_scorecards(const std::vector<ScoreCard>& cards, std::ostream& out) {
  out << "researcher_id,wfo,fo,o,wfi,fi,i\n";
  for (const auto& card : cards) {
    out << csv::join({card.researcher_id, csv::number(card.wfo), csv::number(card.fo),
                      csv::number(card.o), csv::number(card.wfi), csv::number(card.fi),
                      csv::number(card.i)})
        << "\n";
  }
}

void write_scorecards_file(const std::vector<ScoreCard>& cards, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_scorecards(cards, out);
}

}  // namespace credrank
