#include "credrank/credit.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace credrank {

namespace {

constexpr double kBlockSumTolerance = 1e-9;

void check_block(const std::string& name, double sum, std::initializer_list<double> entries) {
  for (double e : entries)
    if (!(e >= 0.0))
      throw InvalidConfig("weight scheme: '" + name + "' block has a negative entry");
  if (std::abs(sum - 1.0) > kBlockSumTolerance)
    throw InvalidConfig("weight scheme: '" + name + "' block sums to " + std::to_string(sum) +
                        ", expected 1");
}

double need_number(const nlohmann::json& block, const std::string& block_name, const char* key) {
  if (!block.contains(key) || !block.at(key).is_number())
    throw InvalidConfig("weight scheme: missing numeric '" + block_name + "." + key + "'");
  return block.at(key).get<double>();
}

// Roles in precedence order. An author takes the first role its position
// matches; left-over role mass is redistributed by allocate().
enum Role : int { kFirst = 0, kLast, kSecond, kSecondLast, kOther, kRoleCount };

}  // namespace

void WeightScheme::validate() const {
  check_block("intra", intra.first + intra.last + intra.others,
              {intra.first, intra.last, intra.others});
  check_block("extra", extra.first + extra.second + extra.second_last + extra.last + extra.others,
              {extra.first, extra.second, extra.second_last, extra.last, extra.others});
}

WeightScheme WeightScheme::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open weight scheme file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidConfig("weight scheme '" + path + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("intra") || !doc.contains("extra"))
    throw InvalidConfig("weight scheme '" + path + "': expected object with 'intra' and 'extra'");

  WeightScheme scheme;
  const auto& intra = doc.at("intra");
  scheme.intra.first = need_number(intra, "intra", "first");
  scheme.intra.last = need_number(intra, "intra", "last");
  scheme.intra.others = need_number(intra, "intra", "others");
  const auto& extra = doc.at("extra");
  scheme.extra.first = need_number(extra, "extra", "first");
  scheme.extra.second = need_number(extra, "extra", "second");
  scheme.extra.second_last = need_number(extra, "extra", "second_last");
  scheme.extra.last = need_number(extra, "extra", "last");
  scheme.extra.others = need_number(extra, "extra", "others");
  scheme.validate();
  return scheme;
}

std::string WeightScheme::to_json_string() const {
  nlohmann::json doc;
  doc["intra"] = {{"first", intra.first}, {"last", intra.last}, {"others", intra.others}};
  doc["extra"] = {{"first", extra.first},
                  {"second", extra.second},
                  {"second_last", extra.second_last},
                  {"last", extra.last},
                  {"others", extra.others}};
  return doc.dump();
}

bool is_intramural(const std::vector<AuthorSlot>& byline) {
  if (byline.empty()) throw EmptyByline();
  return byline.front().university_id == byline.back().university_id;
}

CreditVector allocate(const std::vector<AuthorSlot>& byline, CountingRegime regime,
                      const WeightScheme& scheme) {
  const std::size_t n = byline.size();
  if (n == 0) throw EmptyByline();

  if (regime == CountingRegime::Full) return CreditVector(n, 1.0);
  if (regime == CountingRegime::Fractional) return CreditVector(n, 1.0 / static_cast<double>(n));

  const bool intra = is_intramural(byline);

  double role_mass[kRoleCount] = {};
  bool role_active[kRoleCount] = {};  // part of the schedule at all
  if (intra) {
    role_mass[kFirst] = scheme.intra.first;
    role_mass[kLast] = scheme.intra.last;
    role_mass[kOther] = scheme.intra.others;
    role_active[kFirst] = role_active[kLast] = role_active[kOther] = true;
  } else {
    role_mass[kFirst] = scheme.extra.first;
    role_mass[kSecond] = scheme.extra.second;
    role_mass[kSecondLast] = scheme.extra.second_last;
    role_mass[kLast] = scheme.extra.last;
    role_mass[kOther] = scheme.extra.others;
    for (int r = 0; r < kRoleCount; ++r) role_active[r] = true;
  }

  // Each position claims its highest-precedence matching role.
  std::vector<Role> roles(n, kOther);
  std::size_t other_count = 0;
  for (std::size_t p = 1; p <= n; ++p) {
    Role role = kOther;
    if (p == 1)
      role = kFirst;
    else if (p == n)
      role = kLast;
    else if (role_active[kSecond] && p == 2)
      role = kSecond;
    else if (role_active[kSecondLast] && p == n - 1)
      role = kSecondLast;
    roles[p - 1] = role;
    if (role == kOther) ++other_count;
  }

  bool role_claimed[kRoleCount] = {};
  for (Role r : roles) role_claimed[r] = true;

  // Mass of every unclaimed role gets redistributed proportionally. When
  // nothing is unclaimed the schedule applies verbatim (scale exactly 1).
  bool any_vacant = false;
  double claimed = 0.0;
  for (int r = 0; r < kRoleCount; ++r) {
    if (!role_active[r]) continue;
    if (role_claimed[r])
      claimed += role_mass[r];
    else
      any_vacant = true;
  }
  const double scale = any_vacant ? 1.0 / claimed : 1.0;

  CreditVector weights(n, 0.0);
  const double other_share = other_count > 0 ? role_mass[kOther] / static_cast<double>(other_count) : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double base = roles[k] == kOther ? other_share : role_mass[roles[k]];
    weights[k] = any_vacant ? base * scale : base;
  }
  return weights;
}

}  // namespace credrank
