#include "credrank/types.hpp"

#include <array>

namespace credrank {

namespace {

const std::array<std::string, 3> kRankNames = {"full", "associate", "assistant"};
const std::array<std::string, 3> kDocTypeNames = {"article", "review", "proceedings"};
const std::array<std::string, 2> kDatasetNames = {"output", "impact"};
const std::array<std::string, 6> kIndicatorNames = {"WFO", "FO", "O", "WFI", "FI", "I"};

}  // namespace

const std::string& to_string(AcademicRank rank) { return kRankNames[static_cast<std::size_t>(rank)]; }
const std::string& to_string(DocType type) { return kDocTypeNames[static_cast<std::size_t>(type)]; }
const std::string& to_string(DatasetKind kind) { return kDatasetNames[static_cast<std::size_t>(kind)]; }
const std::string& to_string(Indicator ind) { return kIndicatorNames[static_cast<std::size_t>(ind)]; }

AcademicRank academic_rank_from(const std::string& text) {
  for (std::size_t k = 0; k < kRankNames.size(); ++k)
    if (text == kRankNames[k]) return static_cast<AcademicRank>(k);
  throw ParseError("unknown academic rank '" + text + "' (expected full|associate|assistant)");
}

DocType doc_type_from(const std::string& text) {
  for (std::size_t k = 0; k < kDocTypeNames.size(); ++k)
    if (text == kDocTypeNames[k]) return static_cast<DocType>(k);
  throw ParseError("unknown doc_type '" + text + "' (expected article|review|proceedings)");
}

DatasetKind dataset_kind_from(const std::string& text) {
  for (std::size_t k = 0; k < kDatasetNames.size(); ++k)
    if (text == kDatasetNames[k]) return static_cast<DatasetKind>(k);
  throw ParseError("unknown dataset kind '" + text + "' (expected output|impact)");
}

Indicator indicator_from(const std::string& text) {
  for (std::size_t k = 0; k < kIndicatorNames.size(); ++k)
    if (text == kIndicatorNames[k]) return static_cast<Indicator>(k);
  throw ParseError("unknown indicator '" + text + "'");
}

std::string pair_name(Indicator a, Indicator b) { return to_string(a) + "-" + to_string(b); }

std::vector<std::pair<Indicator, Indicator>> dataset_pairs(DatasetKind kind) {
  if (kind == DatasetKind::Impact)
    return {{Indicator::WFI, Indicator::I}, {Indicator::WFI, Indicator::FI}, {Indicator::FI, Indicator::I}};
  return {{Indicator::WFO, Indicator::O}, {Indicator::WFO, Indicator::FO}, {Indicator::FO, Indicator::O}};
}

std::map<std::string, std::size_t> Corpus::researcher_index() const {
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < researchers.size(); ++k) index.emplace(researchers[k].id, k);
  return index;
}

}  // namespace credrank
