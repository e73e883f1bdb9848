#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "credrank/types.hpp"

namespace credrank {

// Deterministic synthetic-corpus generator. The corpus carries the structure
// the indicators are sensitive to: skewed per-researcher output, skewed
// citations, team authorship, and first/last byline slots that track latent
// productivity as strongly as position_talent_coupling says.
struct SynthConfig {
  struct FieldSpec {
    std::string field_code;
    std::string discipline_code;
    int full = 0;
    int associate = 0;
    int assistant = 0;
  };
  struct Lognormal {
    double mu = 2.0;
    double sigma = 0.8;
  };
  struct NegativeBinomial {
    double r = 1.2;
    double p = 1.0 / 6.0;
  };
  struct CategorySpec {
    std::string name;
    double prob = 0.0;
  };

  std::uint64_t seed = 42;
  YearWindow window{2004, 2008};
  int universities = 20;
  std::vector<FieldSpec> fields;
  Lognormal pubs_per_researcher{};  // latent productivity, publications authored
  // Byline-size shape for n >= 2; P(n = 1) comes from the co-authorship target.
  std::map<int, double> authors_per_pub = {{2, 0.03}, {3, 0.09}, {4, 0.16}, {5, 0.21},
                                           {6, 0.19}, {7, 0.14}, {8, 0.09}, {9, 0.05},
                                           {10, 0.02}, {11, 0.01}, {12, 0.01}};
  double coauthored_share_target = 0.98;  // fixes P(n = 1) = 1 - target
  NegativeBinomial citations{};
  std::vector<CategorySpec> categories = {
      {"biochemistry", 0.20}, {"cell biology", 0.15},    {"genetics", 0.15},    {"oncology", 0.15},
      {"neurosciences", 0.10}, {"internal medicine", 0.15}, {"pharmacology", 0.10}};
  double multi_category_share = 0.15;         // two half-weight categories
  double external_author_share = 0.10;        // per middle slot
  double position_talent_coupling = 1.0;      // 0 = random order, 1 = leaders take first/last
  // Researchers are partitioned into persistent labs that share a
  // university; teams draw mostly from the seed author's lab, so byline
  // leadership reflects a stable within-lab pecking order.
  int lab_size = 9;
  double within_lab_share = 0.85;
  std::map<int, double> years_active_dist = {{2, 0.05}, {3, 0.10}, {4, 0.15}, {5, 0.70}};

  void validate() const;  // throws InvalidConfig with a field-level message

  static SynthConfig defaults();
  static SynthConfig from_json_file(const std::string& path);
  std::string to_json_string() const;
};

struct SynthResult {
  Corpus corpus;
  // researcher id -> latent productivity, diagnostic sidecar only
  std::vector<std::pair<std::string, double>> latent;
};

SynthResult generate(const SynthConfig& config);

void write_latent_file(const SynthResult& result, const std::string& path);

}  // namespace credrank
