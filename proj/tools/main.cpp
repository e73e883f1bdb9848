#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "credrank/corpus.hpp"
#include "credrank/pipeline.hpp"
#include "credrank/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace credrank;

// Exit codes: 0 success, 1 internal error, 2 validation failure,
// 3 configuration failure.
constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kValidation = 2;
constexpr int kConfig = 3;

int cmd_validate(const std::string& researchers_path, const std::string& publications_path) {
  const Corpus corpus = load_corpus(researchers_path, publications_path);
  if (corpus.researchers.empty()) {
    std::cerr << "no researchers\n";
    return kValidation;
  }
  if (corpus.publications.empty()) {
    std::cerr << "no publications\n";
    return kValidation;
  }
  std::cout << "OK: " << corpus.researchers.size() << " researchers, "
            << corpus.publications.size() << " publications\n";
  return kOk;
}

int cmd_synth(const std::optional<std::string>& config_path, const std::optional<std::uint64_t>& seed,
              const std::string& out_dir, bool quiet) {
  SynthConfig config =
      config_path ? SynthConfig::from_json_file(*config_path) : SynthConfig::defaults();
  if (seed) config.seed = *seed;

  const SynthResult result = generate(config);
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  save_corpus(result.corpus, (out / "researchers.csv").string(),
              (out / "publications.jsonl").string());
  write_latent_file(result, (out / "latent.csv").string());

  if (!quiet) {
    std::size_t coauthored = 0, author_slots = 0;
    for (const auto& pub : result.corpus.publications) {
      author_slots += pub.byline.size();
      if (pub.byline.size() >= 2) ++coauthored;
    }
    const double pubs = static_cast<double>(result.corpus.publications.size());
    std::cout << "seed " << config.seed << ": " << result.corpus.researchers.size()
              << " researchers, " << result.corpus.publications.size() << " publications\n"
              << "co-authored share " << (static_cast<double>(coauthored) / pubs)
              << ", mean authors per publication " << (static_cast<double>(author_slots) / pubs)
              << "\n"
              << "wrote researchers.csv, publications.jsonl, latent.csv under " << out_dir << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-author credit allocation, productivity indicators and ranking-distortion reports"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  bool quiet = false;
  std::string manifest_path;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.add_option("--manifest", manifest_path, "write the run manifest to this path");

  std::string researchers_path, publications_path;

  auto* validate = app.add_subcommand("validate", "check a corpus and report diagnostics");
  validate->fallthrough();
  validate->add_option("researchers", researchers_path, "researchers CSV")->required();
  validate->add_option("publications", publications_path, "publications JSON Lines")->required();

  auto* synth = app.add_subcommand("synth", "generate a deterministic synthetic corpus");
  synth->fallthrough();
  std::string synth_config_path;
  std::uint64_t synth_seed = 0;
  auto* synth_config_opt = synth->add_option("--config", synth_config_path, "synth config JSON");
  auto* synth_seed_opt = synth->add_option("--seed", synth_seed, "override the config seed");

  auto* pipeline = app.add_subcommand("pipeline", "run scoring, ranking and comparison reports");
  pipeline->fallthrough();
  pipeline->add_option("researchers", researchers_path, "researchers CSV")->required();
  pipeline->add_option("publications", publications_path, "publications JSON Lines")->required();
  std::string dataset = "output";
  pipeline->add_option("--dataset", dataset, "indicator family: output or impact")
      ->required()
      ->check(CLI::IsMember({"output", "impact"}));
  std::string weights_path;
  auto* weights_opt = pipeline->add_option("--weights", weights_path, "weight scheme JSON");
  std::string baselines = "auto";
  pipeline->add_option("--baselines", baselines,
                       "'auto' (derive from the corpus) or a baselines CSV path")
      ->capture_default_str();
  double bin_width = 5.0;
  pipeline->add_option("--bins", bin_width, "shift histogram bin width")->capture_default_str();
  std::string timestamp;
  auto* timestamp_opt =
      pipeline->add_option("--timestamp", timestamp, "timestamp recorded in the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (validate->parsed()) return cmd_validate(researchers_path, publications_path);
    if (synth->parsed()) {
      std::optional<std::string> config_path;
      if (synth_config_opt->count() > 0) config_path = synth_config_path;
      std::optional<std::uint64_t> seed;
      if (synth_seed_opt->count() > 0) seed = synth_seed;
      return cmd_synth(config_path, seed, out_dir, quiet);
    }
    if (pipeline->parsed()) {
      PipelineOptions options;
      options.researchers_path = researchers_path;
      options.publications_path = publications_path;
      options.dataset = dataset_kind_from(dataset);
      if (weights_opt->count() > 0) options.weights_path = weights_path;
      if (baselines != "auto") options.baselines_path = baselines;
      options.bin_width = bin_width;
      options.out_dir = out_dir;
      if (!manifest_path.empty()) options.manifest_path = manifest_path;
      if (timestamp_opt->count() > 0) options.timestamp = timestamp;
      options.quiet = quiet;
      run_pipeline(options);
      return kOk;
    }
  } catch (const InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
