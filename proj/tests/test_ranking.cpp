#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "credrank/ranking.hpp"
#include "test_util.hpp"

using namespace credrank;
using namespace testutil;

namespace {

std::map<std::string, double> scores_of(const std::vector<double>& values) {
  std::map<std::string, double> scores;
  for (std::size_t k = 0; k < values.size(); ++k)
    scores.emplace("r" + std::to_string(k), values[k]);
  return scores;
}

}  // namespace

TEST_CASE("percentiles span 0-100 worst to best") {
  const auto pct = percentile_rank(scores_of({1, 2, 3, 4, 5}));
  CHECK(pct.at("r0") == 0.0);
  CHECK(pct.at("r1") == 25.0);
  CHECK(pct.at("r2") == 50.0);
  CHECK(pct.at("r3") == 75.0);
  CHECK(pct.at("r4") == 100.0);
}

TEST_CASE("ties share the average competition rank") {
  const auto all_tied = percentile_rank(scores_of({7, 7, 7}));
  for (const auto& [id, pct] : all_tied) CHECK(pct == 50.0);

  const auto partial = percentile_rank(scores_of({1, 1, 3}));
  CHECK(partial.at("r0") == 25.0);  // tied average rank 1.5
  CHECK(partial.at("r1") == 25.0);
  CHECK(partial.at("r2") == 100.0);
}

TEST_CASE("groups below two members cannot be ranked") {
  CHECK_THROWS_AS(percentile_rank(scores_of({42})), GroupTooSmall);
  CHECK_THROWS_AS(percentile_rank({}), GroupTooSmall);
}

TEST_CASE("quartiles partition the percentile scale, best quartile on top") {
  CHECK(quartile_of(100.0) == 1);
  CHECK(quartile_of(75.0) == 1);
  CHECK(quartile_of(74.9) == 2);
  CHECK(quartile_of(50.0) == 2);
  CHECK(quartile_of(49.999) == 3);
  CHECK(quartile_of(25.0) == 3);
  CHECK(quartile_of(24.9) == 4);
  CHECK(quartile_of(0.0) == 4);

  // No gaps and no overlaps across the whole scale.
  for (double p = 0.0; p <= 100.0; p += 0.5) {
    const int q = quartile_of(p);
    CHECK(q >= 1);
    CHECK(q <= 4);
  }
}

TEST_CASE("properties over randomized peer groups") {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<std::size_t> size(2, 60);
  std::uniform_int_distribution<long long> value(0, 1LL << 40);
  std::uniform_int_distribution<int> exponent(-3, 10);

  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = size(rng);
    std::map<std::string, double> scores;
    for (std::size_t k = 0; k < n; ++k) {
      // Integer-valued doubles keep affine transforms exact.
      double v = static_cast<double>(value(rng) % (trial % 3 == 0 ? 5 : (1LL << 40)));
      scores.emplace("r" + std::to_string(k), v);
    }
    const auto pct = percentile_rank(scores);

    double min_pct = 101, max_pct = -1, sum = 0;
    double min_score = 1e300, max_score = -1e300;
    std::size_t at_min = 0, at_max = 0;
    bool any_tie = false;
    for (const auto& [id, score] : scores) {
      for (const auto& [other, other_score] : scores) {
        if (id >= other) continue;
        if (score == other_score) {
          any_tie = true;
          CHECK(pct.at(id) == pct.at(other));
        } else if (score > other_score) {
          CHECK(pct.at(id) > pct.at(other));
        } else {
          CHECK(pct.at(id) < pct.at(other));
        }
      }
      min_pct = std::min(min_pct, pct.at(id));
      max_pct = std::max(max_pct, pct.at(id));
      min_score = std::min(min_score, score);
      max_score = std::max(max_score, score);
      sum += pct.at(id);
    }
    for (const auto& [id, score] : scores) {
      if (score == min_score) ++at_min;
      if (score == max_score) ++at_max;
    }
    CHECK(min_pct >= 0.0);
    CHECK(max_pct <= 100.0);
    // Average-rank ties pull a tied extreme block off the endpoint (the
    // [1,1,3] -> [25,25,100] rule), so 0 and 100 are pinned exactly when the
    // extreme scores are untied.
    if (at_min == 1) CHECK(min_pct == 0.0);
    if (at_max == 1) CHECK(max_pct == 100.0);
    if (!any_tie) CHECK(sum / static_cast<double>(n) == doctest::Approx(50.0).epsilon(1e-12));

    // Affine transformations leave percentiles unchanged.
    const double scale = std::ldexp(1.0, exponent(rng));
    const double offset = static_cast<double>(value(rng));
    std::map<std::string, double> transformed;
    for (const auto& [id, score] : scores) transformed.emplace(id, score * scale + offset);
    const auto pct2 = percentile_rank(transformed);
    for (const auto& [id, p] : pct) CHECK(pct2.at(id) == p);
  }
}

TEST_CASE("build_rankings produces six lists per viable peer group") {
  std::vector<Researcher> researchers;
  std::vector<Publication> pubs;
  auto add = [&](const std::string& id, const std::string& field, AcademicRank rank,
                 std::int64_t citations) {
    researchers.push_back(researcher(id, field, "Biology", rank, 5, "U1"));
    pubs.push_back(publication("P-" + id, 2005, citations, {{"cat", 1.0}}, {{1, id, "U1"}}));
  };
  add("a1", "BIO/10", AcademicRank::Full, 2);
  add("a2", "BIO/10", AcademicRank::Full, 5);
  add("a3", "BIO/10", AcademicRank::Full, 9);
  add("b1", "BIO/11", AcademicRank::Assistant, 1);
  add("b2", "BIO/11", AcademicRank::Assistant, 7);
  add("solo", "BIO/11", AcademicRank::Full, 3);  // group of one: skipped

  const auto corpus = make_corpus(researchers, pubs);
  const auto cards = score_all(corpus, build_baselines(corpus));
  const auto rankings = build_rankings(cards, corpus);

  CHECK(rankings.groups.size() == 2);
  for (const auto& [key, lists] : rankings.groups)
    for (int k = 0; k < kIndicatorCount; ++k)
      CHECK(lists[static_cast<std::size_t>(k)].indicator == static_cast<Indicator>(k));

  REQUIRE(rankings.skipped.size() == 1);
  CHECK(rankings.skipped[0].key.field_code == "BIO/11");
  CHECK(rankings.skipped[0].key.rank == AcademicRank::Full);
  CHECK(rankings.skipped[0].size == 1);

  const auto& full_bio10 = rankings.groups.at({"BIO/10", AcademicRank::Full});
  const auto& impact = full_bio10[index_of(Indicator::I)];
  CHECK(impact.percentiles.at("a3") == 100.0);
  CHECK(impact.percentiles.at("a1") == 0.0);
  CHECK(impact.quartiles.at("a3") == 1);
  CHECK(impact.quartiles.at("a1") == 4);
}

TEST_CASE("ranking CSV is ordered by percentile descending then id") {
  std::vector<Researcher> researchers;
  std::vector<Publication> pubs;
  researchers.push_back(researcher("x", "F/1", "D", AcademicRank::Full, 5, "U1"));
  researchers.push_back(researcher("y", "F/1", "D", AcademicRank::Full, 5, "U1"));
  pubs.push_back(publication("P1", 2005, 4, {{"c", 1.0}}, {{1, std::string("x"), "U1"}}));
  pubs.push_back(publication("P2", 2005, 9, {{"c", 1.0}}, {{1, std::string("y"), "U1"}}));

  const auto corpus = make_corpus(researchers, pubs);
  const auto rankings = build_rankings(score_all(corpus, build_baselines(corpus)), corpus);
  std::ostringstream out;
  write_rankings(rankings, out);
  const auto text = out.str();
  CHECK(text.rfind("field_code,rank,indicator,researcher_id,score,percentile,quartile\n", 0) == 0);
  CHECK(text.find("F/1,full,WFO,") != std::string::npos);
  // y outranks x on every indicator, so each block lists y first.
  CHECK(text.find("F/1,full,I,y,") < text.find("F/1,full,I,x,"));
}
