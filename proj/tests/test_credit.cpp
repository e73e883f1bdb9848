#include <cmath>
#include <random>

#include "doctest.h"

#include "credrank/credit.hpp"
#include "test_util.hpp"

using namespace credrank;
using testutil::byline_of;

namespace {

double sum_of(const CreditVector& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  return total;
}

std::vector<AuthorSlot> random_byline(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> uni(1, 6);
  std::vector<std::string> universities;
  universities.reserve(n);
  for (std::size_t k = 0; k < n; ++k) universities.push_back("U" + std::to_string(uni(rng)));
  return byline_of(universities);
}

}  // namespace

TEST_CASE("weighted allocation follows the published schedules on long bylines") {
  // 5 authors, first and last share a university: 40/40 plus 20 split 3 ways.
  auto intra = allocate(byline_of({"A", "B", "C", "D", "A"}), CountingRegime::Weighted);
  REQUIRE(intra.size() == 5);
  CHECK(intra[0] == 0.40);
  CHECK(intra[4] == 0.40);
  for (int k = 1; k <= 3; ++k) CHECK(intra[static_cast<std::size_t>(k)] == 0.20 / 3.0);

  // 6 authors, different universities at the ends: 30/15/.../15/30.
  auto extra = allocate(byline_of({"A", "B", "C", "D", "E", "F"}), CountingRegime::Weighted);
  REQUIRE(extra.size() == 6);
  CHECK(extra[0] == 0.30);
  CHECK(extra[1] == 0.15);
  CHECK(extra[2] == 0.10 / 2.0);
  CHECK(extra[3] == 0.10 / 2.0);
  CHECK(extra[4] == 0.15);
  CHECK(extra[5] == 0.30);
}

TEST_CASE("weighted allocation on short bylines renormalizes vacant roles") {
  auto sole = allocate(byline_of({"A"}), CountingRegime::Weighted);
  REQUIRE(sole.size() == 1);
  CHECK(sole[0] == 1.0);

  for (auto universities : {std::vector<std::string>{"A", "A"}, std::vector<std::string>{"A", "B"}}) {
    auto two = allocate(byline_of(universities), CountingRegime::Weighted);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two[1] == doctest::Approx(0.5).epsilon(1e-12));
  }

  // 3 extra-mural: roles (0.30, 0.15, 0.30), scale 1/0.75.
  auto three = allocate(byline_of({"A", "B", "C"}), CountingRegime::Weighted);
  REQUIRE(three.size() == 3);
  CHECK(three[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(three[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(three[2] == doctest::Approx(0.4).epsilon(1e-12));

  // 4 extra-mural: unclaimed others pool 0.10, scale 1/0.9.
  auto four = allocate(byline_of({"A", "B", "C", "D"}), CountingRegime::Weighted);
  REQUIRE(four.size() == 4);
  CHECK(four[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(four[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(four[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(four[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("fractional and full regimes") {
  auto fractional = allocate(byline_of({"A", "B", "C", "D"}), CountingRegime::Fractional);
  for (double w : fractional) CHECK(w == 0.25);

  auto full = allocate(byline_of({"A", "B", "C"}), CountingRegime::Full);
  for (double w : full) CHECK(w == 1.0);
}

TEST_CASE("empty byline is rejected in every regime") {
  std::vector<AuthorSlot> empty;
  CHECK_THROWS_AS(allocate(empty, CountingRegime::Weighted), EmptyByline);
  CHECK_THROWS_AS(allocate(empty, CountingRegime::Fractional), EmptyByline);
  CHECK_THROWS_AS(allocate(empty, CountingRegime::Full), EmptyByline);
}

TEST_CASE("byline mode depends only on the first and last universities") {
  CHECK(is_intramural(byline_of({"A", "X", "Y", "A"})));
  CHECK_FALSE(is_intramural(byline_of({"A", "A", "A", "B"})));
  CHECK(is_intramural(byline_of({"A"})));

  auto weights = allocate(byline_of({"A", "X", "Y", "A"}), CountingRegime::Weighted);
  CHECK(weights[0] == 0.40);  // intra schedule despite external middles
}

TEST_CASE("schedule fractions apply verbatim when every role is filled") {
  for (std::size_t n = 3; n <= 50; ++n) {
    std::vector<std::string> universities(n, "B");
    universities.front() = "A";
    universities.back() = "A";
    auto intra = allocate(byline_of(universities), CountingRegime::Weighted);
    CHECK(intra.front() == 0.40);
    CHECK(intra.back() == 0.40);
    for (std::size_t k = 1; k + 1 < n; ++k)
      CHECK(intra[k] == 0.20 / static_cast<double>(n - 2));
  }
  for (std::size_t n = 5; n <= 50; ++n) {
    std::vector<std::string> universities;
    for (std::size_t k = 0; k < n; ++k) universities.push_back("U" + std::to_string(k));
    auto extra = allocate(byline_of(universities), CountingRegime::Weighted);
    CHECK(extra.front() == 0.30);
    CHECK(extra.back() == 0.30);
    CHECK(extra[1] == 0.15);
    CHECK(extra[n - 2] == 0.15);
    for (std::size_t k = 2; k + 2 < n; ++k)
      CHECK(extra[k] == 0.10 / static_cast<double>(n - 4));
  }
}

TEST_CASE("weighted and fractional vectors conserve the unit of credit") {
  std::mt19937_64 rng(20240811);
  std::uniform_int_distribution<std::size_t> size(1, 200);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto byline = random_byline(rng, size(rng));
    const auto weighted = allocate(byline, CountingRegime::Weighted);
    const auto fractional = allocate(byline, CountingRegime::Fractional);
    CHECK(std::abs(sum_of(weighted) - 1.0) <= 1e-12);
    CHECK(std::abs(sum_of(fractional) - 1.0) <= 1e-12);
    for (double w : weighted) CHECK(w >= 0.0);
  }
}

TEST_CASE("full counting dominates both fractional shares position by position") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto byline = random_byline(rng, size(rng));
    const auto weighted = allocate(byline, CountingRegime::Weighted);
    const auto fractional = allocate(byline, CountingRegime::Fractional);
    const auto full = allocate(byline, CountingRegime::Full);
    for (std::size_t k = 0; k < byline.size(); ++k) {
      CHECK(full[k] >= weighted[k]);
      CHECK(full[k] >= fractional[k]);
    }
  }
}

TEST_CASE("weighted allocation is symmetric under byline reversal") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> size(1, 40);
  for (int trial = 0; trial < 500; ++trial) {
    auto byline = random_byline(rng, size(rng));
    const auto forward = allocate(byline, CountingRegime::Weighted);

    std::vector<AuthorSlot> reversed(byline.rbegin(), byline.rend());
    for (std::size_t k = 0; k < reversed.size(); ++k)
      reversed[k].position = static_cast<int>(k) + 1;
    const auto backward = allocate(reversed, CountingRegime::Weighted);

    for (std::size_t k = 0; k < byline.size(); ++k)
      CHECK(forward[k] == backward[byline.size() - 1 - k]);
  }
}

TEST_CASE("middle authors are interchangeable") {
  // Every middle position carries the same weight.
  auto weights = allocate(byline_of({"A", "B", "C", "D", "E", "F", "A"}), CountingRegime::Weighted);
  for (std::size_t k = 2; k + 2 < weights.size(); ++k) CHECK(weights[k] == weights[2]);
}

TEST_CASE("weight scheme validation and JSON loading") {
  WeightScheme scheme;
  CHECK_NOTHROW(scheme.validate());

  scheme.intra.others = 0.3;  // 0.4 + 0.4 + 0.3 != 1
  CHECK_THROWS_AS(scheme.validate(), InvalidConfig);

  const auto dir = testutil::make_temp_dir("scheme");
  const auto path = dir / "weights.json";

  testutil::write_file(path, R"({"intra": {"first": 0.5, "last": 0.3, "others": 0.2},
    "extra": {"first": 0.25, "second": 0.2, "second_last": 0.2, "last": 0.25, "others": 0.1}})");
  const auto custom = WeightScheme::from_json_file(path.string());
  CHECK(custom.intra.first == 0.5);
  auto weights = allocate(byline_of({"A", "B", "A"}), CountingRegime::Weighted, custom);
  CHECK(weights[0] == 0.5);
  CHECK(weights[1] == 0.2);
  CHECK(weights[2] == 0.3);

  testutil::write_file(path, R"({"intra": {"first": 0.6, "last": 0.3, "others": 0.2},
    "extra": {"first": 0.25, "second": 0.2, "second_last": 0.2, "last": 0.25, "others": 0.1}})");
  CHECK_THROWS_AS(WeightScheme::from_json_file(path.string()), InvalidConfig);

  testutil::write_file(path, R"({"intra": {"first": 0.8, "last": 0.2}})");
  CHECK_THROWS_AS(WeightScheme::from_json_file(path.string()), InvalidConfig);

  testutil::write_file(path, "not json");
  CHECK_THROWS_AS(WeightScheme::from_json_file(path.string()), InvalidConfig);
}
