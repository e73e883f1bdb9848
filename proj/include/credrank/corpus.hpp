#pragma once

#include <iosfwd>
#include <string>

#include "credrank/types.hpp"

namespace credrank {

// Loads and cross-validates a corpus from the two input files:
// researchers CSV (id,university_id,field_code,discipline_code,rank,years_active)
// and publications JSON Lines.
Corpus load_corpus(const std::string& researchers_path, const std::string& publications_path);

void save_corpus(const Corpus& corpus, const std::string& researchers_path,
                 const std::string& publications_path);

// Semantic validation of an in-memory corpus: unique ids, resolvable byline
// references, consecutive positions, category weights summing to 1, one
// discipline per field, window consistency.
void validate_corpus(const Corpus& corpus);

struct FilterResult {
  Corpus corpus;
  ExclusionLog exclusions;
};

// Applies the eligibility rules: minimum years of service, per-field
// publishing share, the dataset-kind output/citation requirement, and the
// per-rank field size floor. Byline slots of excluded researchers are kept
// but demoted to external authors, so their credit mass is still consumed.
// Throws EmptyResult when nobody survives.
FilterResult filter_eligible(const Corpus& corpus, const EligibilityConfig& config);

void write_exclusion_log(const ExclusionLog& log, std::ostream& out);
void write_exclusion_log_file(const ExclusionLog& log, const std::string& path);

}  // namespace credrank
