#pragma once

#include <string>
#include <vector>

#include "credrank/types.hpp"

namespace credrank {

enum class CountingRegime { Weighted, Fractional, Full };

// Position-weight schedule. The defaults are the life-science convention:
// intra-mural bylines give 40% each to first and last author and split the
// remaining 20% among the middle authors; extra-mural bylines give 30% to
// first and last, 15% to second and second-last, and split the remaining 10%.
// Both blocks must sum to 1.
struct WeightScheme {
  struct Intramural {
    double first = 0.40;
    double last = 0.40;
    double others = 0.20;
  };
  struct Extramural {
    double first = 0.30;
    double second = 0.15;
    double second_last = 0.15;
    double last = 0.30;
    double others = 0.10;
  };

  Intramural intra;
  Extramural extra;

  void validate() const;  // throws InvalidConfig
  static WeightScheme from_json_file(const std::string& path);
  std::string to_json_string() const;
};

// One credit weight per byline position, byline order.
using CreditVector = std::vector<double>;

// A byline is intra-mural when its first and last authors share a university.
bool is_intramural(const std::vector<AuthorSlot>& byline);

// Splits one publication's unit of credit across the byline. Weighted and
// Fractional vectors sum to 1; Full gives every author the whole unit.
// Weighted role weights are assigned by precedence first > last > second >
// second-last > other; mass belonging to roles nobody claims is redistributed
// proportionally so the vector still sums to 1. Bylines long enough to fill
// every role get the schedule's literal fractions untouched.
CreditVector allocate(const std::vector<AuthorSlot>& byline, CountingRegime regime,
                      const WeightScheme& scheme = {});

}  // namespace credrank
