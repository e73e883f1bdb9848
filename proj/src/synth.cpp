#include "credrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "json.hpp"

#include "credrank/corpus.hpp"
#include "credrank/csv.hpp"

namespace credrank {

namespace {

using Rng = std::mt19937_64;

std::string padded_id(char prefix, std::size_t value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width)
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return prefix + digits;
}

// Categorical draw over (value, weight) pairs; weights need not sum to 1.
template <typename T>
const T& pick_weighted(Rng& rng, const std::vector<std::pair<T, double>>& items, double total) {
  double roll = std::uniform_real_distribution<double>(0.0, total)(rng);
  for (const auto& [value, weight] : items) {
    roll -= weight;
    if (roll <= 0.0) return value;
  }
  return items.back().first;
}

std::int64_t negative_binomial(Rng& rng, const SynthConfig::NegativeBinomial& params) {
  // Gamma-Poisson mixture, so r may be non-integral.
  const double scale = (1.0 - params.p) / params.p;
  const double lambda = std::gamma_distribution<double>(params.r, scale)(rng);
  if (lambda < 1e-12) return 0;
  return std::poisson_distribution<std::int64_t>(lambda)(rng);
}

struct Member {
  std::size_t researcher;  // index into corpus.researchers
  double latent;
  int remaining;           // authorship slots still owed
  std::size_t lab = 0;
};

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& message) { throw InvalidConfig(message); };

  if (window.first > window.last) fail("window: start year after end year");
  if (universities < 1) fail("universities: must be >= 1");
  if (fields.empty()) fail("fields: at least one field required");
  for (const auto& field : fields) {
    if (field.field_code.empty()) fail("fields: empty field_code");
    if (field.discipline_code.empty()) fail("fields[" + field.field_code + "]: empty discipline_code");
    for (auto [label, count] : {std::pair{"full", field.full},
                                std::pair{"associate", field.associate},
                                std::pair{"assistant", field.assistant}}) {
      if (count < 0) fail("fields[" + field.field_code + "]." + label + ": negative count");
      // Nonzero rank groups must survive the default per-rank size filter.
      if (count > 0 && count < 10)
        fail("fields[" + field.field_code + "]." + label + ": nonzero count below 10");
    }
    if (field.full + field.associate + field.assistant == 0)
      fail("fields[" + field.field_code + "]: no researchers");
  }
  if (!(pubs_per_researcher.sigma >= 0.0)) fail("pubs_per_researcher.sigma: must be >= 0");
  if (authors_per_pub.empty()) fail("authors_per_pub: empty distribution");
  double shape_total = 0.0;
  for (const auto& [n, weight] : authors_per_pub) {
    if (n < 2) fail("authors_per_pub: sizes below 2 are driven by coauthored_share_target");
    if (weight < 0.0) fail("authors_per_pub[" + std::to_string(n) + "]: negative weight");
    shape_total += weight;
  }
  if (shape_total <= 0.0) fail("authors_per_pub: weights sum to 0");
  if (coauthored_share_target < 0.0 || coauthored_share_target > 1.0)
    fail("coauthored_share_target: must be in [0,1]");
  if (!(citations.r > 0.0)) fail("citations.r: must be > 0");
  if (!(citations.p > 0.0) || citations.p >= 1.0) fail("citations.p: must be in (0,1)");
  if (categories.empty()) fail("categories: at least one category required");
  double cat_total = 0.0;
  for (const auto& cat : categories) {
    if (cat.name.empty()) fail("categories: empty name");
    if (cat.prob < 0.0) fail("categories[" + cat.name + "].prob: negative");
    cat_total += cat.prob;
  }
  if (cat_total <= 0.0) fail("categories: probabilities sum to 0");
  if (multi_category_share < 0.0 || multi_category_share > 1.0)
    fail("multi_category_share: must be in [0,1]");
  if (external_author_share < 0.0 || external_author_share > 1.0)
    fail("external_author_share: must be in [0,1]");
  if (position_talent_coupling < 0.0 || position_talent_coupling > 1.0)
    fail("position_talent_coupling: must be in [0,1]");
  if (lab_size < 1) fail("lab_size: must be >= 1");
  if (within_lab_share < 0.0 || within_lab_share > 1.0)
    fail("within_lab_share: must be in [0,1]");
  if (years_active_dist.empty()) fail("years_active_dist: empty distribution");
  double years_total = 0.0;
  for (const auto& [years, weight] : years_active_dist) {
    if (years < 1) fail("years_active_dist: years below 1");
    if (weight < 0.0) fail("years_active_dist[" + std::to_string(years) + "]: negative weight");
    years_total += weight;
  }
  if (years_total <= 0.0) fail("years_active_dist: weights sum to 0");
}

SynthConfig SynthConfig::defaults() {
  SynthConfig config;
  config.fields = {
      {"BIO/10", "Biology", 55, 60, 75},  {"BIO/11", "Biology", 55, 60, 75},
      {"BIO/18", "Biology", 55, 60, 75},  {"MED/06", "Medicine", 55, 60, 75},
      {"MED/09", "Medicine", 55, 60, 75}, {"MED/26", "Medicine", 55, 60, 75},
  };
  return config;
}

SynthConfig SynthConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open synth config '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidConfig("synth config '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw InvalidConfig("synth config: expected a JSON object");

  SynthConfig config = SynthConfig::defaults();
  auto number = [&](const char* key, double& slot) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_number()) throw InvalidConfig(std::string("synth config: '") + key + "' must be a number");
    slot = doc.at(key).get<double>();
  };

  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer())
      throw InvalidConfig("synth config: 'seed' must be an integer");
    config.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("window")) {
    const auto& window = doc.at("window");
    if (!window.is_object() || !window.contains("start") || !window.contains("end"))
      throw InvalidConfig("synth config: 'window' needs 'start' and 'end'");
    config.window.first = window.at("start").get<int>();
    config.window.last = window.at("end").get<int>();
  }
  if (doc.contains("universities")) config.universities = doc.at("universities").get<int>();
  if (doc.contains("fields")) {
    if (!doc.at("fields").is_array()) throw InvalidConfig("synth config: 'fields' must be an array");
    config.fields.clear();
    for (const auto& entry : doc.at("fields")) {
      SynthConfig::FieldSpec spec;
      if (!entry.contains("field_code") || !entry.contains("discipline_code"))
        throw InvalidConfig("synth config: field entries need 'field_code' and 'discipline_code'");
      spec.field_code = entry.at("field_code").get<std::string>();
      spec.discipline_code = entry.at("discipline_code").get<std::string>();
      spec.full = entry.value("full", 0);
      spec.associate = entry.value("associate", 0);
      spec.assistant = entry.value("assistant", 0);
      config.fields.push_back(std::move(spec));
    }
  }
  if (doc.contains("pubs_per_researcher")) {
    const auto& ln = doc.at("pubs_per_researcher");
    config.pubs_per_researcher.mu = ln.value("mu", config.pubs_per_researcher.mu);
    config.pubs_per_researcher.sigma = ln.value("sigma", config.pubs_per_researcher.sigma);
  }
  if (doc.contains("authors_per_pub")) {
    const auto& shape = doc.at("authors_per_pub");
    if (!shape.is_object()) throw InvalidConfig("synth config: 'authors_per_pub' must map size -> weight");
    config.authors_per_pub.clear();
    for (const auto& [key, value] : shape.items()) {
      int n = 0;
      try {
        n = std::stoi(key);
      } catch (const std::exception&) {
        throw InvalidConfig("synth config: authors_per_pub key '" + key + "' is not an integer");
      }
      config.authors_per_pub[n] = value.get<double>();
    }
  }
  number("coauthored_share_target", config.coauthored_share_target);
  if (doc.contains("citations")) {
    const auto& nb = doc.at("citations");
    config.citations.r = nb.value("r", config.citations.r);
    config.citations.p = nb.value("p", config.citations.p);
  }
  if (doc.contains("categories")) {
    if (!doc.at("categories").is_array())
      throw InvalidConfig("synth config: 'categories' must be an array");
    config.categories.clear();
    for (const auto& entry : doc.at("categories")) {
      if (!entry.contains("name") || !entry.contains("prob"))
        throw InvalidConfig("synth config: category entries need 'name' and 'prob'");
      config.categories.push_back({entry.at("name").get<std::string>(), entry.at("prob").get<double>()});
    }
  }
  number("multi_category_share", config.multi_category_share);
  number("external_author_share", config.external_author_share);
  number("position_talent_coupling", config.position_talent_coupling);
  if (doc.contains("lab_size")) config.lab_size = doc.at("lab_size").get<int>();
  number("within_lab_share", config.within_lab_share);
  if (doc.contains("years_active_dist")) {
    const auto& dist = doc.at("years_active_dist");
    if (!dist.is_object()) throw InvalidConfig("synth config: 'years_active_dist' must map years -> weight");
    config.years_active_dist.clear();
    for (const auto& [key, value] : dist.items()) {
      int years = 0;
      try {
        years = std::stoi(key);
      } catch (const std::exception&) {
        throw InvalidConfig("synth config: years_active_dist key '" + key + "' is not an integer");
      }
      config.years_active_dist[years] = value.get<double>();
    }
  }
  config.validate();
  return config;
}

std::string SynthConfig::to_json_string() const {
  nlohmann::json doc;
  doc["seed"] = seed;
  doc["window"] = {{"start", window.first}, {"end", window.last}};
  doc["universities"] = universities;
  auto& fields_json = doc["fields"] = nlohmann::json::array();
  for (const auto& field : fields)
    fields_json.push_back({{"field_code", field.field_code},
                           {"discipline_code", field.discipline_code},
                           {"full", field.full},
                           {"associate", field.associate},
                           {"assistant", field.assistant}});
  doc["pubs_per_researcher"] = {{"mu", pubs_per_researcher.mu}, {"sigma", pubs_per_researcher.sigma}};
  auto& shape = doc["authors_per_pub"] = nlohmann::json::object();
  for (const auto& [n, weight] : authors_per_pub) shape[std::to_string(n)] = weight;
  doc["coauthored_share_target"] = coauthored_share_target;
  doc["citations"] = {{"r", citations.r}, {"p", citations.p}};
  auto& cats = doc["categories"] = nlohmann::json::array();
  for (const auto& cat : categories) cats.push_back({{"name", cat.name}, {"prob", cat.prob}});
  doc["multi_category_share"] = multi_category_share;
  doc["external_author_share"] = external_author_share;
  doc["position_talent_coupling"] = position_talent_coupling;
  doc["lab_size"] = lab_size;
  doc["within_lab_share"] = within_lab_share;
  auto& years = doc["years_active_dist"] = nlohmann::json::object();
  for (const auto& [y, weight] : years_active_dist) years[std::to_string(y)] = weight;
  return doc.dump();
}

SynthResult generate(const SynthConfig& config) {
  config.validate();

  Rng rng(config.seed);
  SynthResult result;
  Corpus& corpus = result.corpus;

  std::vector<std::pair<int, double>> size_dist;  // byline size incl. n=1
  {
    double shape_total = 0.0;
    for (const auto& [n, weight] : config.authors_per_pub) shape_total += weight;
    size_dist.emplace_back(1, 1.0 - config.coauthored_share_target);
    for (const auto& [n, weight] : config.authors_per_pub)
      size_dist.emplace_back(n, config.coauthored_share_target * weight / shape_total);
  }
  double size_total = 0.0;
  for (const auto& [n, weight] : size_dist) size_total += weight;

  std::vector<std::pair<int, double>> years_dist(config.years_active_dist.begin(),
                                                 config.years_active_dist.end());
  double years_total = 0.0;
  for (const auto& [y, weight] : years_dist) years_total += weight;

  std::vector<std::pair<std::string, double>> category_dist;
  double category_total = 0.0;
  for (const auto& cat : config.categories) {
    category_dist.emplace_back(cat.name, cat.prob);
    category_total += cat.prob;
  }

  std::vector<std::pair<DocType, double>> doc_type_dist = {
      {DocType::Article, 0.85}, {DocType::Review, 0.10}, {DocType::ProceedingsPaper, 0.05}};

  std::uniform_int_distribution<int> university_draw(1, config.universities);
  std::uniform_int_distribution<int> external_university_draw(1, 5);
  std::uniform_int_distribution<int> year_draw(config.window.first, config.window.last);
  std::lognormal_distribution<double> latent_draw(config.pubs_per_researcher.mu,
                                                  config.pubs_per_researcher.sigma);

  // Researchers, field by field in config order. Each field is partitioned
  // into labs; a lab shares one university, so single-lab publications come
  // out intra-mural.
  std::vector<std::vector<Member>> field_members(config.fields.size());
  std::size_t researcher_counter = 0;
  for (std::size_t f = 0; f < config.fields.size(); ++f) {
    const auto& spec = config.fields[f];
    for (auto [rank, count] : {std::pair{AcademicRank::Full, spec.full},
                               std::pair{AcademicRank::Associate, spec.associate},
                               std::pair{AcademicRank::Assistant, spec.assistant}}) {
      for (int k = 0; k < count; ++k) {
        Researcher r;
        r.id = padded_id('R', ++researcher_counter, 6);
        r.field_code = spec.field_code;
        r.discipline_code = spec.discipline_code;
        r.rank = rank;
        r.years_active = pick_weighted(rng, years_dist, years_total);
        const double latent = latent_draw(rng);
        field_members[f].push_back(
            {corpus.researchers.size(), latent,
             static_cast<int>(std::llround(latent)), 0});
        result.latent.emplace_back(r.id, latent);
        corpus.researchers.push_back(std::move(r));
      }
    }

    // Labs are latent-sorted chunks: strong labs hold strong researchers, so
    // each lab head is only a local maximum among near-equals.
    auto& members = field_members[f];
    std::vector<std::size_t> by_latent(members.size());
    std::iota(by_latent.begin(), by_latent.end(), std::size_t{0});
    std::sort(by_latent.begin(), by_latent.end(), [&](std::size_t x, std::size_t y) {
      if (members[x].latent != members[y].latent) return members[x].latent > members[y].latent;
      return x < y;
    });
    const auto lab_width = static_cast<std::size_t>(config.lab_size);
    for (std::size_t start = 0; start < by_latent.size(); start += lab_width) {
      const std::size_t lab_id = start / lab_width;
      const std::string university =
          padded_id('U', static_cast<std::size_t>(university_draw(rng)), 2);
      for (std::size_t j = start; j < std::min(start + lab_width, by_latent.size()); ++j) {
        members[by_latent[j]].lab = lab_id;
        corpus.researchers[members[by_latent[j]].researcher].university_id = university;
      }
    }
  }

  // Publications: teams are drawn within a field, weighted by the authorship
  // slots each member still owes, until every slot is spent.
  std::size_t pub_counter = 0;
  for (std::size_t f = 0; f < config.fields.size(); ++f) {
    auto& members = field_members[f];
    auto owed = [&]() {
      long total = 0;
      for (const auto& m : members) total += m.remaining;
      return total;
    };

    while (owed() > 0) {
      std::vector<std::size_t> available;
      for (std::size_t k = 0; k < members.size(); ++k)
        if (members[k].remaining > 0) available.push_back(k);

      int n = pick_weighted(rng, size_dist, size_total);
      int externals = 0;
      if (n >= 3) {
        std::binomial_distribution<int> external_draw(n - 2, config.external_author_share);
        externals = external_draw(rng);
      }
      int tracked = n - externals;
      if (tracked > static_cast<int>(available.size())) {
        tracked = static_cast<int>(available.size());
        if (tracked < 2) externals = 0;
        n = tracked + externals;
      }

      // The team forms around a seed member and draws the remaining slots
      // mostly from the seed's lab, falling back to the whole field.
      std::vector<std::size_t> team;
      {
        std::vector<std::pair<std::size_t, double>> field_pool;
        double field_total = 0.0;
        for (std::size_t k : available) {
          field_pool.emplace_back(k, static_cast<double>(members[k].remaining));
          field_total += static_cast<double>(members[k].remaining);
        }
        const std::size_t seed_member = pick_weighted(rng, field_pool, field_total);
        const std::size_t seed_lab = members[seed_member].lab;

        auto remove_from = [](std::vector<std::pair<std::size_t, double>>& pool, double& total,
                              std::size_t value) {
          for (std::size_t j = 0; j < pool.size(); ++j) {
            if (pool[j].first == value) {
              total -= pool[j].second;
              pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
              return;
            }
          }
        };

        std::vector<std::pair<std::size_t, double>> lab_pool;
        double lab_total = 0.0;
        for (const auto& [k, weight] : field_pool)
          if (members[k].lab == seed_lab) {
            lab_pool.emplace_back(k, weight);
            lab_total += weight;
          }

        team.push_back(seed_member);
        remove_from(field_pool, field_total, seed_member);
        remove_from(lab_pool, lab_total, seed_member);

        std::bernoulli_distribution in_lab(config.within_lab_share);
        for (int pickk = 1; pickk < tracked && !field_pool.empty(); ++pickk) {
          const bool prefer_lab = !lab_pool.empty() && in_lab(rng);
          const std::size_t chosen = prefer_lab ? pick_weighted(rng, lab_pool, lab_total)
                                                : pick_weighted(rng, field_pool, field_total);
          team.push_back(chosen);
          remove_from(field_pool, field_total, chosen);
          remove_from(lab_pool, lab_total, chosen);
        }
      }
      for (std::size_t k : team) members[k].remaining = std::max(0, members[k].remaining - 1);

      // Order the tracked members: under coupling the strongest member leads
      // the group from the last slot and the runner-up takes first; middles
      // are shuffled either way.
      std::vector<std::size_t> ordered;
      const bool coupled =
          std::bernoulli_distribution(config.position_talent_coupling)(rng);
      if (team.size() >= 2 && coupled) {
        std::vector<std::size_t> by_latent = team;
        std::sort(by_latent.begin(), by_latent.end(), [&](std::size_t x, std::size_t y) {
          if (members[x].latent != members[y].latent) return members[x].latent > members[y].latent;
          return x < y;
        });
        std::vector<std::size_t> middles(by_latent.begin() + 2, by_latent.end());
        std::shuffle(middles.begin(), middles.end(), rng);
        ordered.push_back(by_latent[1]);  // first author: runner-up
        ordered.insert(ordered.end(), middles.begin(), middles.end());
        ordered.push_back(by_latent[0]);  // last author: group leader
      } else {
        ordered = team;
        std::shuffle(ordered.begin(), ordered.end(), rng);
      }

      // Choose which middle positions are external.
      const int total_slots = static_cast<int>(ordered.size()) + externals;
      std::vector<bool> external_at(static_cast<std::size_t>(total_slots), false);
      if (externals > 0) {
        std::vector<int> middle_positions;
        for (int p = 2; p < total_slots; ++p) middle_positions.push_back(p);
        std::shuffle(middle_positions.begin(), middle_positions.end(), rng);
        for (int e = 0; e < externals; ++e)
          external_at[static_cast<std::size_t>(middle_positions[static_cast<std::size_t>(e)] - 1)] =
              true;
      }

      Publication pub;
      pub.id = padded_id('P', ++pub_counter, 6);
      pub.year = year_draw(rng);
      pub.doc_type = pick_weighted(rng, doc_type_dist, 1.0);
      pub.citations = negative_binomial(rng, config.citations);

      const std::string& first_category = pick_weighted(rng, category_dist, category_total);
      const bool multi = config.categories.size() > 1 &&
                         std::bernoulli_distribution(config.multi_category_share)(rng);
      if (multi) {
        std::string second_category = first_category;
        for (int attempt = 0; attempt < 16 && second_category == first_category; ++attempt)
          second_category = pick_weighted(rng, category_dist, category_total);
        if (second_category != first_category) {
          pub.categories = {{first_category, 0.5}, {second_category, 0.5}};
        } else {
          pub.categories = {{first_category, 1.0}};
        }
      } else {
        pub.categories = {{first_category, 1.0}};
      }

      std::size_t next_tracked = 0;
      for (int p = 1; p <= total_slots; ++p) {
        AuthorSlot slot;
        slot.position = p;
        if (external_at[static_cast<std::size_t>(p - 1)]) {
          slot.university_id =
              padded_id('X', static_cast<std::size_t>(external_university_draw(rng)), 2);
        } else {
          const auto& member = members[ordered[next_tracked++]];
          const auto& researcher = corpus.researchers[member.researcher];
          slot.researcher_id = researcher.id;
          slot.university_id = researcher.university_id;
        }
        pub.byline.push_back(std::move(slot));
      }
      corpus.publications.push_back(std::move(pub));
    }
  }

  if (!corpus.publications.empty()) {
    corpus.window.first = corpus.publications.front().year;
    corpus.window.last = corpus.window.first;
    for (const auto& pub : corpus.publications) {
      corpus.window.first = std::min(corpus.window.first, pub.year);
      corpus.window.last = std::max(corpus.window.last, pub.year);
    }
  }

  validate_corpus(corpus);
  return result;
}

void write_latent_file(const SynthResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "researcher_id,latent_productivity\n";
  for (const auto& [id, latent] : result.latent)
    out << csv::join({id, csv::number(latent)}) << "\n";
}

}  // namespace credrank
