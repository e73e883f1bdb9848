#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "credrank/scoring.hpp"
#include "test_util.hpp"

using namespace credrank;
using namespace testutil;

namespace {

Corpus corpus_with(std::vector<Publication> pubs,
                   std::vector<Researcher> researchers = {
                       researcher("R1", "BIO/10", "Biology", AcademicRank::Full, 5, "U1")}) {
  return make_corpus(std::move(researchers), std::move(pubs));
}

// Straight-line re-evaluation of the two productivity equations, kept
// deliberately separate from the library implementation. Role masses are
// assigned by overwriting in reverse precedence order.
namespace oracle {

enum Role { kOther, kSecondLast, kSecond, kLast, kFirst };

std::vector<double> weighted(const std::vector<AuthorSlot>& byline) {
  const std::size_t n = byline.size();
  const bool intra = byline.front().university_id == byline.back().university_id;

  std::vector<Role> roles(n, kOther);
  if (!intra && n >= 2) {
    roles[n - 2] = kSecondLast;
    roles[1] = kSecond;
  }
  roles[n - 1] = kLast;
  roles[0] = kFirst;

  double mass[5] = {};
  mass[kFirst] = intra ? 0.40 : 0.30;
  mass[kLast] = intra ? 0.40 : 0.30;
  mass[kSecond] = intra ? 0.0 : 0.15;
  mass[kSecondLast] = intra ? 0.0 : 0.15;
  mass[kOther] = intra ? 0.20 : 0.10;

  std::size_t others = 0;
  bool present[5] = {};
  for (Role r : roles) {
    present[r] = true;
    if (r == kOther) ++others;
  }

  double claimed = 0.0;
  bool vacancy = false;
  for (int r = 0; r < 5; ++r) {
    if (intra && (r == kSecond || r == kSecondLast)) continue;
    if (present[r])
      claimed += mass[r];
    else
      vacancy = true;
  }

  std::vector<double> weights(n);
  for (std::size_t k = 0; k < n; ++k) {
    double w = roles[k] == kOther ? mass[kOther] / static_cast<double>(others) : mass[roles[k]];
    if (vacancy) w /= claimed;
    weights[k] = w;
  }
  return weights;
}

std::map<std::pair<int, std::string>, double> medians(const Corpus& corpus) {
  std::map<std::pair<int, std::string>, std::vector<double>> cells;
  for (const auto& pub : corpus.publications)
    if (pub.citations >= 1)
      for (const auto& cat : pub.categories)
        cells[{pub.year, cat.name}].push_back(static_cast<double>(pub.citations));
  std::map<std::pair<int, std::string>, double> result;
  for (auto& [cell, values] : cells) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    result[cell] = m % 2 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
  }
  return result;
}

// Recomputes all six values for one researcher from first principles.
ScoreCard score(const Corpus& corpus, const Researcher& who,
                const std::map<std::pair<int, std::string>, double>& me) {
  std::vector<const Publication*> pubs;
  for (const auto& pub : corpus.publications) pubs.push_back(&pub);
  std::sort(pubs.begin(), pubs.end(),
            [](const Publication* a, const Publication* b) { return a->id < b->id; });

  ScoreCard card;
  card.researcher_id = who.id;
  for (const Publication* pub : pubs) {
    int position = 0;
    for (const auto& slot : pub->byline)
      if (slot.researcher_id == who.id) position = slot.position;
    if (position == 0) continue;

    const auto w = weighted(pub->byline);
    const double weight = w[static_cast<std::size_t>(position - 1)];
    const double frac = 1.0 / static_cast<double>(pub->byline.size());

    double impact = 0.0;
    if (pub->citations > 0)
      for (const auto& cat : pub->categories)
        impact += cat.weight * (static_cast<double>(pub->citations) / me.at({pub->year, cat.name}));

    card.wfo += weight;
    card.fo += frac;
    card.o += 1.0;
    card.wfi += impact * weight;
    card.fi += impact * frac;
    card.i += impact;
  }
  const double t = static_cast<double>(who.years_active);
  card.wfo /= t;
  card.fo /= t;
  card.o /= t;
  card.wfi /= t;
  card.fi /= t;
  card.i /= t;
  return card;
}

}  // namespace oracle

Corpus random_corpus(std::mt19937_64& rng, std::size_t researcher_count) {
  std::uniform_int_distribution<int> years(1, 5);
  std::uniform_int_distribution<int> uni(1, 4);
  std::uniform_int_distribution<int> cites(0, 12);
  std::uniform_int_distribution<int> year(2004, 2008);
  std::uniform_int_distribution<int> cat(1, 3);
  std::bernoulli_distribution two_cats(0.3);

  std::vector<Researcher> researchers;
  for (std::size_t k = 0; k < researcher_count; ++k)
    researchers.push_back(researcher("R" + std::to_string(k), "F/1", "D",
                                     AcademicRank::Full, years(rng), "U" + std::to_string(uni(rng))));

  std::uniform_int_distribution<std::size_t> pubs_count(researcher_count, researcher_count * 3);
  const std::size_t total = pubs_count(rng);
  std::vector<Publication> pubs;
  for (std::size_t p = 0; p < total; ++p) {
    std::uniform_int_distribution<std::size_t> team_size(1, std::min<std::size_t>(8, researcher_count));
    std::vector<std::size_t> team(researchers.size());
    std::iota(team.begin(), team.end(), std::size_t{0});
    std::shuffle(team.begin(), team.end(), rng);
    team.resize(team_size(rng));

    Publication pub;
    pub.id = "P" + std::to_string(p);
    pub.year = year(rng);
    pub.citations = cites(rng);
    const std::string first_cat = "C" + std::to_string(cat(rng));
    if (two_cats(rng)) {
      std::string second = "C" + std::to_string(cat(rng));
      if (second == first_cat) second += "x";
      pub.categories = {{first_cat, 0.5}, {second, 0.5}};
    } else {
      pub.categories = {{first_cat, 1.0}};
    }
    for (std::size_t k = 0; k < team.size(); ++k)
      pub.byline.push_back({static_cast<int>(k) + 1, researchers[team[k]].id,
                            researchers[team[k]].university_id});
    pubs.push_back(std::move(pub));
  }
  return make_corpus(std::move(researchers), std::move(pubs));
}

}  // namespace

TEST_CASE("baselines take the median of cited-only publications per cell") {
  std::vector<Publication> pubs;
  int counter = 0;
  auto add = [&](int year, const std::string& cat, std::int64_t citations) {
    pubs.push_back(publication("P" + std::to_string(++counter), year, citations, {{cat, 1.0}},
                               {{1, std::string("R1"), "U1"}}));
  };
  for (std::int64_t c : {1, 2, 3, 4, 100}) add(2005, "A", c);
  for (std::int64_t c : {2, 4}) add(2006, "A", c);
  for (std::int64_t c : {0, 0, 3}) add(2007, "A", c);  // zeros drop out of the cell
  for (std::int64_t c : {0, 0}) add(2008, "A", c);     // fully uncited cell

  const auto table = build_baselines(corpus_with(std::move(pubs)));
  CHECK(table.lookup(2005, "A") == 3.0);  // odd count
  CHECK(table.lookup(2006, "A") == 3.0);  // even count, mean of the middle two
  CHECK(table.lookup(2007, "A") == 3.0);
  CHECK_FALSE(table.lookup(2008, "A").has_value());
  CHECK_FALSE(table.lookup(2005, "B").has_value());
}

TEST_CASE("normalized impact is the weighted average of citations over medians") {
  BaselineTable table;
  table.medians[{2005, "A"}] = 5.0;
  table.medians[{2005, "B"}] = 6.0;
  table.medians[{2005, "C"}] = 2.0;

  auto one = publication("P1", 2005, 10, {{"A", 1.0}}, {{1, std::string("R1"), "U1"}});
  CHECK(normalized_impact(one, table) == doctest::Approx(2.0).epsilon(1e-12));

  auto two = publication("P2", 2005, 6, {{"C", 0.5}, {"B", 0.5}}, {{1, std::string("R1"), "U1"}});
  CHECK(normalized_impact(two, table) == doctest::Approx(2.0).epsilon(1e-12));  // 0.5*3 + 0.5*1

  auto uncited = publication("P3", 2005, 0, {{"Z", 1.0}}, {{1, std::string("R1"), "U1"}});
  CHECK(normalized_impact(uncited, table) == 0.0);  // no baseline needed

  auto missing = publication("P4", 2005, 3, {{"Z", 1.0}}, {{1, std::string("R1"), "U1"}});
  try {
    normalized_impact(missing, table);
    FAIL("expected MissingBaseline");
  } catch (const MissingBaseline& e) {
    CHECK(e.year() == 2005);
    CHECK(e.category() == "Z");
  }
}

TEST_CASE("score_all evaluates the productivity equations directly") {
  // Researcher R1 first of a 5-author intra-mural byline: weight 0.40, t = 5.
  std::vector<AuthorSlot> byline;
  byline.push_back({1, std::string("R1"), "U1"});
  for (int k = 2; k <= 4; ++k) byline.push_back({k, std::nullopt, "X" + std::to_string(k)});
  byline.push_back({5, std::nullopt, "U1"});

  BaselineTable table;
  table.medians[{2005, "A"}] = 5.0;

  SUBCASE("single publication") {
    const auto corpus = corpus_with({publication("P1", 2005, 10, {{"A", 1.0}}, byline)});
    const auto cards = score_all(corpus, table);
    REQUIRE(cards.size() == 1);
    CHECK(cards[0].wfo == doctest::Approx(0.08).epsilon(1e-12));   // 0.40 / 5
    CHECK(cards[0].fo == doctest::Approx(0.04).epsilon(1e-12));    // (1/5) / 5
    CHECK(cards[0].o == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(cards[0].wfi == doctest::Approx(0.16).epsilon(1e-12));   // 2.0 * 0.40 / 5
    CHECK(cards[0].i == doctest::Approx(0.4).epsilon(1e-12));
  }

  SUBCASE("two publications with distinct weights and impacts") {
    // w = 0.5 (2 authors) and 1/3 (4 authors extra-mural first), impacts 1.2 and 3.0.
    BaselineTable t2;
    t2.medians[{2005, "A"}] = 10.0;
    auto p1 = publication("P1", 2005, 12, {{"A", 1.0}},
                          {{1, std::string("R1"), "U1"}, {2, std::nullopt, "X1"}});
    auto p2 = publication("P2", 2005, 30, {{"A", 1.0}},
                          {{1, std::string("R1"), "U1"},
                           {2, std::nullopt, "X1"},
                           {3, std::nullopt, "X2"},
                           {4, std::nullopt, "X3"}});
    auto who = researcher("R1", "BIO/10", "Biology", AcademicRank::Full, 4, "U1");
    const auto cards = score_all(make_corpus({who}, {p1, p2}), t2);
    REQUIRE(cards.size() == 1);
    CHECK(cards[0].wfi == doctest::Approx(0.4).epsilon(1e-12));  // (0.5*1.2 + (1/3)*3.0) / 4
  }

  SUBCASE("sole authorship collapses the three regimes") {
    const auto corpus = corpus_with(
        {publication("P1", 2005, 10, {{"A", 1.0}}, {{1, std::string("R1"), "U1"}})});
    const auto cards = score_all(corpus, table);
    REQUIRE(cards.size() == 1);
    CHECK(cards[0].wfo == cards[0].fo);
    CHECK(cards[0].fo == cards[0].o);
    CHECK(cards[0].wfi == cards[0].fi);
    CHECK(cards[0].fi == cards[0].i);
  }

  SUBCASE("researchers without publications emit no card") {
    auto mute = researcher("R2", "BIO/10", "Biology", AcademicRank::Full, 5, "U1");
    const auto corpus = make_corpus(
        {researcher("R1", "BIO/10", "Biology", AcademicRank::Full, 5, "U1"), mute},
        {publication("P1", 2005, 10, {{"A", 1.0}}, {{1, std::string("R1"), "U1"}})});
    const auto cards = score_all(corpus, table);
    REQUIRE(cards.size() == 1);
    CHECK(cards[0].researcher_id == "R1");
  }

  SUBCASE("missing baseline propagates") {
    const auto corpus = corpus_with({publication("P1", 2005, 10, {{"B", 1.0}}, byline)});
    CHECK_THROWS_AS(score_all(corpus, table), MissingBaseline);
  }
}

TEST_CASE("full counting dominates every scorecard") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    const auto corpus = random_corpus(rng, 12);
    const auto table = build_baselines(corpus);
    for (const auto& card : score_all(corpus, table)) {
      CHECK(card.o >= card.fo);
      CHECK(card.o >= card.wfo);
      CHECK(card.i >= card.fi);
      CHECK(card.i >= card.wfi);
    }
  }
}

TEST_CASE("scaling citations scales impact indicators and leaves output untouched") {
  std::mt19937_64 rng(808);
  const auto corpus = random_corpus(rng, 10);
  const auto table = build_baselines(corpus);
  const auto cards = score_all(corpus, table);

  Corpus scaled = corpus;
  for (auto& pub : scaled.publications) pub.citations *= 4;  // power of two: exact
  BaselineTable scaled_table;
  for (const auto& [cell, median] : table.medians) scaled_table.medians[cell] = median;
  const auto scaled_cards = score_all(scaled, scaled_table);

  REQUIRE(scaled_cards.size() == cards.size());
  for (std::size_t k = 0; k < cards.size(); ++k) {
    CHECK(scaled_cards[k].wfo == cards[k].wfo);
    CHECK(scaled_cards[k].fo == cards[k].fo);
    CHECK(scaled_cards[k].o == cards[k].o);
    CHECK(scaled_cards[k].wfi == 4.0 * cards[k].wfi);
    CHECK(scaled_cards[k].fi == 4.0 * cards[k].fi);
    CHECK(scaled_cards[k].i == 4.0 * cards[k].i);
  }
}

TEST_CASE("scorecards are independent of publication file order") {
  std::mt19937_64 rng(313);
  const auto corpus = random_corpus(rng, 8);
  const auto table = build_baselines(corpus);
  const auto cards = score_all(corpus, table);

  Corpus shuffled = corpus;
  std::shuffle(shuffled.publications.begin(), shuffled.publications.end(), rng);
  const auto cards2 = score_all(shuffled, table);

  REQUIRE(cards2.size() == cards.size());
  for (std::size_t k = 0; k < cards.size(); ++k) {
    CHECK(cards2[k].researcher_id == cards[k].researcher_id);
    CHECK(cards2[k].wfo == cards[k].wfo);
    CHECK(cards2[k].wfi == cards[k].wfi);
    CHECK(cards2[k].i == cards[k].i);
  }
}

TEST_CASE("score_all matches the brute-force oracle on small corpora") {
  std::mt19937_64 rng(161803);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<std::size_t> size(2, 20);
    const auto corpus = random_corpus(rng, size(rng));
    const auto table = build_baselines(corpus);
    const auto cards = score_all(corpus, table);

    const auto me = oracle::medians(corpus);
    for (const auto& [cell, median] : me)
      CHECK(table.lookup(cell.first, cell.second) == doctest::Approx(median).epsilon(1e-15));

    auto index = corpus.researcher_index();
    for (const auto& card : cards) {
      const auto expected = oracle::score(corpus, corpus.researchers[index.at(card.researcher_id)], me);
      CHECK(card.wfo == doctest::Approx(expected.wfo).epsilon(1e-12));
      CHECK(card.fo == doctest::Approx(expected.fo).epsilon(1e-12));
      CHECK(card.o == doctest::Approx(expected.o).epsilon(1e-12));
      CHECK(card.wfi == doctest::Approx(expected.wfi).epsilon(1e-12));
      CHECK(card.fi == doctest::Approx(expected.fi).epsilon(1e-12));
      CHECK(card.i == doctest::Approx(expected.i).epsilon(1e-12));
    }
  }
}

TEST_CASE("scorecard CSV uses 10 significant digits") {
  ScoreCard card;
  card.researcher_id = "R1";
  card.wfo = 1.0 / 3.0;
  card.fo = 0.125;
  card.o = 2;
  card.wfi = 2.0 / 3.0;
  card.fi = 0.5;
  card.i = 4;
  std::ostringstream out;
  write_scorecards({card}, out);
  CHECK(out.str() ==
        "researcher_id,wfo,fo,o,wfi,fi,i\n"
        "R1,0.3333333333,0.125,2,0.6666666667,0.5,4\n");
}

TEST_CASE("baseline table round-trips through CSV") {
  BaselineTable table;
  table.medians[{2005, "biochemistry"}] = 3.5;
  table.medians[{2006, "genetics"}] = 7.0;

  const auto dir = make_temp_dir("baselines");
  const auto path = (dir / "baselines.csv").string();
  table.write_csv_file(path);
  const auto reloaded = BaselineTable::from_csv_file(path);
  CHECK(reloaded.medians == table.medians);

  // Metadata comment lines are tolerated.
  write_file(dir / "with_meta.csv", "# manifest=abc\n" + read_file(path));
  const auto reloaded2 = BaselineTable::from_csv_file((dir / "with_meta.csv").string());
  CHECK(reloaded2.medians == table.medians);
}
