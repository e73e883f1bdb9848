#include "credrank/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "credrank/csv.hpp"

namespace credrank {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

const std::vector<std::string> kResearcherHeader = {"id",              "university_id",
                                                    "field_code",      "discipline_code",
                                                    "rank",            "years_active"};

int parse_int_field(const std::string& text, const std::string& what, const std::string& file,
                    long line) {
  try {
    std::size_t pos = 0;
    int value = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing junk");
    return value;
  } catch (const std::exception&) {
    throw ParseError("invalid " + what + " '" + text + "'", file, line);
  }
}

std::vector<Researcher> load_researchers(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file", path);

  long line_no = 0;
  std::vector<std::string> fields;
  if (!csv::read_record(in, fields, path, line_no))
    throw ParseError("empty researchers file", path);
  if (fields != kResearcherHeader)
    throw ParseError("bad header, expected 'id,university_id,field_code,discipline_code,rank,years_active'",
                     path, line_no);

  std::vector<Researcher> researchers;
  while (csv::read_record(in, fields, path, line_no)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != kResearcherHeader.size())
      throw ParseError("expected 6 fields, got " + std::to_string(fields.size()), path, line_no);
    Researcher r;
    r.id = fields[0];
    r.university_id = fields[1];
    r.field_code = fields[2];
    r.discipline_code = fields[3];
    try {
      r.rank = academic_rank_from(fields[4]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), path, line_no);
    }
    r.years_active = parse_int_field(fields[5], "years_active", path, line_no);
    if (r.id.empty()) throw ParseError("empty researcher id", path, line_no);
    if (r.field_code.empty()) throw ParseError("empty field_code", path, line_no);
    if (r.years_active < 1) throw ParseError("years_active must be >= 1", path, line_no);
    researchers.push_back(std::move(r));
  }
  return researchers;
}

Publication parse_publication(const nlohmann::json& doc, const std::string& path, long line_no) {
  auto fail = [&](const std::string& msg) -> ParseError { return ParseError(msg, path, line_no); };
  if (!doc.is_object()) throw fail("expected a JSON object");

  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!doc.contains(key)) throw fail(std::string("missing key '") + key + "'");
    return doc.at(key);
  };

  Publication pub;
  if (!need("id").is_string()) throw fail("'id' must be a string");
  pub.id = doc.at("id").get<std::string>();
  if (pub.id.empty()) throw fail("empty publication id");
  if (!need("year").is_number_integer()) throw fail("'year' must be an integer");
  pub.year = doc.at("year").get<int>();
  if (!need("doc_type").is_string()) throw fail("'doc_type' must be a string");
  try {
    pub.doc_type = doc_type_from(doc.at("doc_type").get<std::string>());
  } catch (const ParseError& e) {
    throw fail(e.what());
  }
  if (!need("citations").is_number_integer()) throw fail("'citations' must be an integer");
  pub.citations = doc.at("citations").get<std::int64_t>();
  if (pub.citations < 0) throw fail("'citations' must be >= 0");

  const auto& cats = need("categories");
  if (!cats.is_array() || cats.empty()) throw fail("'categories' must be a non-empty array");
  std::size_t with_weight = 0;
  for (const auto& entry : cats) {
    if (!entry.is_object() || !entry.contains("name") || !entry.at("name").is_string())
      throw fail("category entries need a string 'name'");
    CategoryShare share;
    share.name = entry.at("name").get<std::string>();
    if (share.name.empty()) throw fail("empty category name");
    if (entry.contains("weight")) {
      if (!entry.at("weight").is_number()) throw fail("category 'weight' must be a number");
      share.weight = entry.at("weight").get<double>();
      ++with_weight;
    }
    pub.categories.push_back(std::move(share));
  }
  if (with_weight == 0) {
    // No weights supplied: equal split across listed categories.
    const double w = 1.0 / static_cast<double>(pub.categories.size());
    for (auto& share : pub.categories) share.weight = w;
  } else if (with_weight != pub.categories.size()) {
    throw fail("either all category weights or none must be given");
  }

  const auto& byline = need("byline");
  if (!byline.is_array() || byline.empty()) throw fail("'byline' must be a non-empty array");
  for (const auto& entry : byline) {
    if (!entry.is_object()) throw fail("byline entries must be objects");
    AuthorSlot slot;
    if (!entry.contains("position") || !entry.at("position").is_number_integer())
      throw fail("byline entries need an integer 'position'");
    slot.position = entry.at("position").get<int>();
    if (entry.contains("researcher_id")) {
      if (!entry.at("researcher_id").is_string()) throw fail("'researcher_id' must be a string");
      slot.researcher_id = entry.at("researcher_id").get<std::string>();
    }
    if (!entry.contains("university_id") || !entry.at("university_id").is_string())
      throw fail("byline entries need a string 'university_id'");
    slot.university_id = entry.at("university_id").get<std::string>();
    pub.byline.push_back(std::move(slot));
  }
  std::sort(pub.byline.begin(), pub.byline.end(),
            [](const AuthorSlot& a, const AuthorSlot& b) { return a.position < b.position; });
  return pub;
}

std::vector<Publication> load_publications(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file", path);

  std::vector<Publication> pubs;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), path, line_no);
    }
    pubs.push_back(parse_publication(doc, path, line_no));
  }
  return pubs;
}

YearWindow derive_window(const std::vector<Publication>& pubs) {
  YearWindow window;
  if (pubs.empty()) return window;
  window.first = std::numeric_limits<int>::max();
  window.last = std::numeric_limits<int>::min();
  for (const auto& pub : pubs) {
    window.first = std::min(window.first, pub.year);
    window.last = std::max(window.last, pub.year);
  }
  return window;
}

}  // namespace

Corpus load_corpus(const std::string& researchers_path, const std::string& publications_path) {
  Corpus corpus;
  corpus.researchers = load_researchers(researchers_path);
  corpus.publications = load_publications(publications_path);
  corpus.window = derive_window(corpus.publications);
  validate_corpus(corpus);
  return corpus;
}

void validate_corpus(const Corpus& corpus) {
  std::set<std::string> ids;
  std::map<std::string, std::string> field_discipline;
  for (const auto& r : corpus.researchers) {
    if (r.id.empty()) throw ParseError("researcher with empty id");
    if (r.field_code.empty()) throw ParseError("researcher '" + r.id + "' has empty field_code");
    if (r.years_active < 1)
      throw ParseError("researcher '" + r.id + "' has years_active < 1");
    if (!ids.insert(r.id).second) throw DuplicateId(r.id);
    auto [it, inserted] = field_discipline.emplace(r.field_code, r.discipline_code);
    if (!inserted && it->second != r.discipline_code)
      throw ParseError("field '" + r.field_code + "' appears under disciplines '" + it->second +
                       "' and '" + r.discipline_code + "'");
  }

  std::set<std::string> pub_ids;
  for (const auto& pub : corpus.publications) {
    if (pub.id.empty()) throw ParseError("publication with empty id");
    if (!pub_ids.insert(pub.id).second) throw DuplicateId(pub.id);
    if (pub.citations < 0)
      throw ParseError("publication '" + pub.id + "' has negative citations");
    if (pub.byline.empty()) throw EmptyByline();
    if (pub.categories.empty())
      throw ParseError("publication '" + pub.id + "' has no categories");

    double weight_sum = 0.0;
    for (const auto& share : pub.categories) {
      if (!(share.weight > 0.0) || share.weight > 1.0)
        throw ParseError("publication '" + pub.id + "': category weight " +
                         std::to_string(share.weight) + " outside (0,1]");
      weight_sum += share.weight;
    }
    if (std::abs(weight_sum - 1.0) > kWeightSumTolerance)
      throw ParseError("publication '" + pub.id + "': category weights sum to " +
                       std::to_string(weight_sum) + ", expected 1");

    std::set<std::string> seen_in_byline;
    for (std::size_t k = 0; k < pub.byline.size(); ++k) {
      const auto& slot = pub.byline[k];
      if (slot.position != static_cast<int>(k) + 1)
        throw ParseError("publication '" + pub.id + "': byline positions must be consecutive 1.." +
                         std::to_string(pub.byline.size()));
      if (slot.researcher_id) {
        if (!ids.count(*slot.researcher_id))
          throw DanglingReference(*slot.researcher_id, "publication '" + pub.id + "'");
        if (!seen_in_byline.insert(*slot.researcher_id).second)
          throw ParseError("publication '" + pub.id + "': researcher '" + *slot.researcher_id +
                           "' appears twice in the byline");
      }
    }
    if (!corpus.publications.empty() &&
        (pub.year < corpus.window.first || pub.year > corpus.window.last))
      throw ParseError("publication '" + pub.id + "' outside the corpus window");
  }
}

void save_corpus(const Corpus& corpus, const std::string& researchers_path,
                 const std::string& publications_path) {
  {
    std::ofstream out(researchers_path, std::ios::binary);
    if (!out) throw Error("cannot write '" + researchers_path + "'");
    out << csv::join(kResearcherHeader) << "\n";
    for (const auto& r : corpus.researchers) {
      out << csv::join({r.id, r.university_id, r.field_code, r.discipline_code, to_string(r.rank),
                        std::to_string(r.years_active)})
          << "\n";
    }
  }
  {
    std::ofstream out(publications_path, std::ios::binary);
    if (!out) throw Error("cannot write '" + publications_path + "'");
    for (const auto& pub : corpus.publications) {
      nlohmann::json doc;
      doc["id"] = pub.id;
      doc["year"] = pub.year;
      doc["doc_type"] = to_string(pub.doc_type);
      doc["citations"] = pub.citations;
      auto& cats = doc["categories"] = nlohmann::json::array();
      for (const auto& share : pub.categories)
        cats.push_back({{"name", share.name}, {"weight", share.weight}});
      auto& byline = doc["byline"] = nlohmann::json::array();
      for (const auto& slot : pub.byline) {
        nlohmann::json entry = {{"position", slot.position}, {"university_id", slot.university_id}};
        if (slot.researcher_id) entry["researcher_id"] = *slot.researcher_id;
        byline.push_back(std::move(entry));
      }
      out << doc.dump() << "\n";
    }
  }
}

FilterResult filter_eligible(const Corpus& corpus, const EligibilityConfig& config) {
  if (config.min_years < 1) throw InvalidConfig("min_years must be >= 1");
  if (config.min_per_rank < 1) throw InvalidConfig("min_per_rank must be >= 1");
  if (config.min_publishing_share < 0.0 || config.min_publishing_share > 1.0)
    throw InvalidConfig("min_publishing_share must be in [0,1]");

  const std::size_t n = corpus.researchers.size();
  auto index = corpus.researcher_index();

  std::vector<bool> has_pub(n, false);
  std::vector<std::int64_t> citations(n, 0);
  for (const auto& pub : corpus.publications) {
    for (const auto& slot : pub.byline) {
      if (!slot.researcher_id) continue;
      auto it = index.find(*slot.researcher_id);
      if (it == index.end()) continue;
      has_pub[it->second] = true;
      citations[it->second] += pub.citations;
    }
  }

  ExclusionLog log;
  std::vector<bool> alive(n, true);
  auto drop = [&](std::size_t k, const char* rule) {
    alive[k] = false;
    log.push_back({"researcher", corpus.researchers[k].id, rule});
  };

  // 1. Minimum years of service.
  for (std::size_t k = 0; k < n; ++k)
    if (corpus.researchers[k].years_active < config.min_years) drop(k, "min_years");

  // 2. Field publishing share, measured over the unfiltered input population.
  std::map<std::string, std::pair<std::size_t, std::size_t>> field_share;  // publishing, total
  for (std::size_t k = 0; k < n; ++k) {
    auto& entry = field_share[corpus.researchers[k].field_code];
    if (has_pub[k]) ++entry.first;
    ++entry.second;
  }
  std::set<std::string> shared_out;
  for (const auto& [field, counts] : field_share) {
    const double share = static_cast<double>(counts.first) / static_cast<double>(counts.second);
    if (share < config.min_publishing_share) shared_out.insert(field);
  }
  for (std::size_t k = 0; k < n; ++k)
    if (alive[k] && shared_out.count(corpus.researchers[k].field_code))
      drop(k, "field_publishing_share");

  // 3. Dataset-kind requirement: at least one publication / one citation.
  for (std::size_t k = 0; k < n; ++k) {
    if (!alive[k]) continue;
    if (config.dataset_kind == DatasetKind::Output) {
      if (!has_pub[k]) drop(k, "no_publications");
    } else {
      if (citations[k] == 0) drop(k, "no_citations");
    }
  }

  // 4. Per-rank field size, measured over the researchers still standing so
  //    that re-applying the filter is a no-op.
  std::map<std::string, std::array<std::size_t, 3>> rank_counts;
  for (std::size_t k = 0; k < n; ++k) {
    if (!alive[k]) continue;
    rank_counts[corpus.researchers[k].field_code]
               [static_cast<std::size_t>(corpus.researchers[k].rank)]++;
  }
  std::set<std::string> undersized;
  for (const auto& [field, counts] : rank_counts) {
    for (std::size_t r = 0; r < 3; ++r) {
      // Only rank groups that exist are tested; an absent rank does not
      // disqualify a field.
      if (counts[r] > 0 && counts[r] < static_cast<std::size_t>(config.min_per_rank)) {
        undersized.insert(field);
        break;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    if (alive[k] && undersized.count(corpus.researchers[k].field_code)) drop(k, "field_rank_size");

  FilterResult result;
  std::set<std::string> surviving_ids;
  for (std::size_t k = 0; k < n; ++k) {
    if (!alive[k]) continue;
    result.corpus.researchers.push_back(corpus.researchers[k]);
    surviving_ids.insert(corpus.researchers[k].id);
  }
  if (result.corpus.researchers.empty())
    throw EmptyResult("no researcher passes the eligibility filters");

  // Keep every publication; slots of excluded researchers become external
  // co-authors so they still consume their credit share.
  result.corpus.publications = corpus.publications;
  for (auto& pub : result.corpus.publications)
    for (auto& slot : pub.byline)
      if (slot.researcher_id && !surviving_ids.count(*slot.researcher_id))
        slot.researcher_id.reset();
  result.corpus.window = corpus.window;
  result.exclusions = std::move(log);
  return result;
}

void write_exclusion_log(const ExclusionLog& log, std::ostream& out) {
  out << "entity_kind,entity_id,rule\n";
  for (const auto& entry : log)
    out << csv::join({entry.entity_kind, entry.entity_id, entry.rule}) << "\n";
}

void write_exclusion_log_file(const ExclusionLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_exclusion_log(log, out);
}

}  // namespace credrank
