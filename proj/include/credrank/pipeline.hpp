#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "credrank/types.hpp"

namespace credrank {

inline constexpr const char* kToolName = "credrank";
inline constexpr const char* kToolVersion = "0.1.0";

struct PipelineOptions {
  std::string researchers_path;
  std::string publications_path;
  DatasetKind dataset = DatasetKind::Output;
  std::optional<std::string> weights_path;    // default scheme when absent
  std::optional<std::string> baselines_path;  // absent = build from the input corpus
  double bin_width = 5.0;
  std::string out_dir = ".";
  std::optional<std::string> manifest_path;  // default <out_dir>/manifest.json
  // Recorded in the manifest verbatim; reports stay byte-reproducible because
  // nothing is stamped unless the caller asks for it.
  std::optional<std::string> timestamp;
  bool quiet = false;
  EligibilityConfig eligibility;  // dataset_kind is overridden by `dataset`
};

struct PipelineSummary {
  std::size_t researchers_in = 0;
  std::size_t publications = 0;
  std::size_t eligible = 0;
  std::size_t excluded = 0;
  std::size_t peer_groups = 0;
  std::size_t skipped_groups = 0;
  std::size_t reports = 0;
  std::string manifest_hash;
};

// Runs load -> filter -> baselines -> scores -> rankings -> comparisons and
// writes the full report bundle under out_dir.
PipelineSummary run_pipeline(const PipelineOptions& options);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace credrank
