#include "credrank/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "credrank/compare.hpp"
#include "credrank/corpus.hpp"
#include "credrank/csv.hpp"
#include "credrank/ranking.hpp"
#include "credrank/scoring.hpp"

namespace credrank {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kCorrelationNote = "Spearman rank correlation, average-rank ties";
constexpr const char* kShiftAxisNote = "absolute 0-100 percentile difference";

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
  return out;
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string tagged(const std::optional<FieldExtreme>& extreme, int decimals) {
  if (!extreme) return "NA";
  return fixed(extreme->value, decimals) + " (" + extreme->field_code + ")";
}

std::string opt_fixed(const std::optional<double>& value, int decimals, double scale = 1.0) {
  return value ? fixed(*value * scale, decimals) : "NA";
}

json optional_json(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

json report_json(const ComparisonReport& report, const std::string& manifest_hash) {
  json doc;
  doc["manifest"] = manifest_hash;
  doc["pair"] = pair_name(report.a, report.b);
  doc["indicator_a"] = to_string(report.a);
  doc["indicator_b"] = to_string(report.b);
  doc["scope"] = {{"kind", report.scope_kind}, {"id", report.scope_id}};
  doc["observations"] = report.observations;
  doc["correlation_statistic"] = kCorrelationNote;
  doc["shift_axis"] = kShiftAxisNote;
  doc["spearman"] = optional_json(report.spearman);
  doc["shift_stats"] = {{"mean", report.shifts.stats.mean},
                        {"max", report.shifts.stats.max},
                        {"stddev", report.shifts.stats.stddev}};
  auto& bins = doc["shift_histogram"] = json::array();
  for (const auto& bin : report.shifts.bins)
    bins.push_back({{"lo", bin.lo}, {"hi", bin.hi}, {"share", bin.share}});
  auto& matrix = doc["quartile_matrix"] = json::array();
  for (const auto& row : report.quartile_matrix) {
    json cells = json::array();
    for (double cell : row) cells.push_back(cell);
    matrix.push_back(std::move(cells));
  }
  doc["lost_top10"] = optional_json(report.lost_top10);
  doc["lost_above_median"] = optional_json(report.lost_above_median);
  return doc;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

PipelineSummary run_pipeline(const PipelineOptions& options) {
  const fs::path out_dir(options.out_dir);
  fs::create_directories(out_dir);
  fs::create_directories(out_dir / "reports");

  const Corpus corpus = load_corpus(options.researchers_path, options.publications_path);
  if (corpus.publications.empty()) throw Error("no publications");

  WeightScheme scheme;
  if (options.weights_path) scheme = WeightScheme::from_json_file(*options.weights_path);

  // Manifest: inputs and configuration, hashed, so reports are traceable to
  // the exact run that produced them.
  json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;
  manifest["dataset_kind"] = to_string(options.dataset);
  manifest["bin_width"] = options.bin_width;
  manifest["correlation_statistic"] = kCorrelationNote;
  manifest["shift_axis"] = kShiftAxisNote;
  manifest["eligibility"] = {{"min_years", options.eligibility.min_years},
                             {"min_per_rank", options.eligibility.min_per_rank},
                             {"min_publishing_share", options.eligibility.min_publishing_share}};
  manifest["inputs"] = {
      {"researchers",
       {{"path", options.researchers_path},
        {"fnv1a64", fnv1a64_hex(read_file_bytes(options.researchers_path))}}},
      {"publications",
       {{"path", options.publications_path},
        {"fnv1a64", fnv1a64_hex(read_file_bytes(options.publications_path))}}}};
  if (options.baselines_path)
    manifest["inputs"]["baselines"] = {
        {"path", *options.baselines_path},
        {"fnv1a64", fnv1a64_hex(read_file_bytes(*options.baselines_path))}};
  else
    manifest["inputs"]["baselines"] = "auto";
  if (options.weights_path)
    manifest["inputs"]["weights"] = {
        {"path", *options.weights_path},
        {"fnv1a64", fnv1a64_hex(read_file_bytes(*options.weights_path))}};
  else
    manifest["inputs"]["weights"] = "default";
  manifest["weight_scheme"] = json::parse(scheme.to_json_string());
  manifest["timestamp"] = options.timestamp ? json(*options.timestamp) : json(nullptr);

  const std::string manifest_text = manifest.dump(2) + "\n";
  const std::string manifest_hash = fnv1a64_hex(manifest_text);
  const fs::path manifest_path =
      options.manifest_path ? fs::path(*options.manifest_path) : out_dir / "manifest.json";
  write_text_file(manifest_path, manifest_text);

  auto meta = [&](std::initializer_list<std::pair<std::string, std::string>> entries) {
    std::string line = "# manifest=" + manifest_hash;
    for (const auto& [key, value] : entries) line += "; " + key + "=" + value;
    line += "\n";
    return line;
  };

  // Filter, score, rank.
  EligibilityConfig eligibility = options.eligibility;
  eligibility.dataset_kind = options.dataset;
  FilterResult filtered = filter_eligible(corpus, eligibility);

  {
    std::ostringstream body;
    write_exclusion_log(filtered.exclusions, body);
    write_text_file(out_dir / "exclusions.csv", meta({{"table", "exclusions"}}) + body.str());
  }

  BaselineTable baselines = options.baselines_path
                                ? BaselineTable::from_csv_file(*options.baselines_path)
                                : build_baselines(corpus);
  {
    std::ostringstream body;
    baselines.write_csv(body);
    write_text_file(out_dir / "baselines.csv", meta({{"table", "baselines"}}) + body.str());
  }

  const auto cards = score_all(filtered.corpus, baselines, scheme);
  {
    std::ostringstream body;
    write_scorecards(cards, body);
    write_text_file(out_dir / "scorecards.csv",
                    meta({{"table", "scorecards"}, {"dataset", to_string(options.dataset)}}) +
                        body.str());
  }

  const RankingSet rankings = build_rankings(cards, filtered.corpus);
  if (rankings.groups.empty()) throw Error("no peer group has at least 2 ranked researchers");
  {
    std::ostringstream body;
    write_rankings(rankings, body);
    write_text_file(out_dir / "rankings.csv",
                    meta({{"table", "rankings"}, {"dataset", to_string(options.dataset)}}) +
                        body.str());
  }
  {
    std::string body = "field_code,rank,size\n";
    for (const auto& skip : rankings.skipped)
      body += csv::join({skip.key.field_code, to_string(skip.key.rank),
                         std::to_string(skip.size)}) +
              "\n";
    write_text_file(out_dir / "skipped_groups.csv", meta({{"table", "skipped_groups"}}) + body);
  }

  // Comparisons at field, discipline and total scope.
  const auto standings = flatten_rankings(rankings, filtered.corpus);
  const auto pairs = dataset_pairs(options.dataset);

  std::map<std::string, std::vector<const ResearcherStanding*>> by_field, by_discipline;
  std::vector<const ResearcherStanding*> all_rows;
  std::map<std::string, std::set<std::string>> discipline_fields;
  for (const auto& row : standings) {
    by_field[row.field_code].push_back(&row);
    by_discipline[row.discipline_code].push_back(&row);
    discipline_fields[row.discipline_code].insert(row.field_code);
    all_rows.push_back(&row);
  }

  std::vector<ComparisonReport> field_reports, discipline_reports, total_reports;
  for (const auto& [field, rows] : by_field)
    for (const auto& [a, b] : pairs)
      field_reports.push_back(compare_standings(rows, a, b, options.bin_width, "field", field));
  for (const auto& [discipline, rows] : by_discipline)
    for (const auto& [a, b] : pairs)
      discipline_reports.push_back(
          compare_standings(rows, a, b, options.bin_width, "discipline", discipline));
  for (const auto& [a, b] : pairs)
    total_reports.push_back(compare_standings(all_rows, a, b, options.bin_width, "total", ""));

  std::size_t report_files = 0;
  auto emit_report = [&](const ComparisonReport& report) {
    std::string stem = report.scope_kind;
    if (!report.scope_id.empty()) stem += "_" + sanitize(report.scope_id);
    stem += "__" + pair_name(report.a, report.b);
    write_text_file(out_dir / "reports" / (stem + ".json"),
                    report_json(report, manifest_hash).dump(2) + "\n");
    ++report_files;
  };
  for (const auto& report : field_reports) emit_report(report);
  for (const auto& report : discipline_reports) emit_report(report);
  for (const auto& report : total_reports) emit_report(report);

  // Shift histograms for figure reproduction: per discipline and total.
  auto emit_histogram = [&](const ComparisonReport& report) {
    const std::string scope_label =
        report.scope_kind == "total" ? "total" : report.scope_kind + ":" + report.scope_id;
    std::string body = "bin_lo,bin_hi,share\n";
    for (const auto& bin : report.shifts.bins)
      body += csv::join({csv::number(bin.lo), csv::number(bin.hi), csv::number(bin.share)}) + "\n";
    std::string stem = "fig_shift_";
    stem += report.scope_kind == "total" ? "total" : sanitize(report.scope_id);
    stem += "_" + pair_name(report.a, report.b);
    write_text_file(out_dir / (stem + ".csv"),
                    meta({{"figure", "shift_distribution"},
                          {"scope", scope_label},
                          {"pair", pair_name(report.a, report.b)},
                          {"axis", "|percentile delta|"}}) +
                        body);
  };
  for (const auto& report : discipline_reports) emit_histogram(report);
  for (const auto& report : total_reports) emit_histogram(report);

  // Rollups drive the table renderings.
  std::vector<DisciplineRollup> rollups;
  for (const auto& [discipline, fields] : discipline_fields) {
    std::vector<ComparisonReport> disc_of, fields_of;
    for (const auto& report : discipline_reports)
      if (report.scope_id == discipline) disc_of.push_back(report);
    for (const auto& report : field_reports)
      if (fields.count(report.scope_id)) fields_of.push_back(report);
    rollups.push_back(make_rollup(discipline, disc_of, fields_of));
  }

  const bool impact = options.dataset == DatasetKind::Impact;
  std::string pair_columns;
  for (const auto& [a, b] : pairs) pair_columns += "," + pair_name(a, b);

  // Correlation summary (table2/table3).
  {
    std::string body = "scope,stat" + pair_columns + "\n";
    auto row = [&](const std::string& scope, const std::string& stat,
                   const std::vector<std::string>& cells) {
      std::vector<std::string> fields_row = {scope, stat};
      fields_row.insert(fields_row.end(), cells.begin(), cells.end());
      body += csv::join(fields_row) + "\n";
    };
    for (const auto& rollup : rollups) {
      std::vector<std::string> obs, general, maxc, minc;
      for (const auto& pair : rollup.pairs) {
        obs.push_back(std::to_string(pair.observations));
        general.push_back(opt_fixed(pair.general_correlation, 4));
        maxc.push_back(tagged(pair.max_correlation, 4));
        minc.push_back(tagged(pair.min_correlation, 4));
      }
      row(rollup.discipline, "observations", obs);
      row(rollup.discipline, "general_correlation", general);
      row(rollup.discipline, "max_correlation", maxc);
      row(rollup.discipline, "min_correlation", minc);
    }
    std::vector<std::string> obs, general;
    for (const auto& report : total_reports) {
      obs.push_back(std::to_string(report.observations));
      general.push_back(opt_fixed(report.spearman, 4));
    }
    row("total", "observations", obs);
    row("total", "general_correlation", general);
    write_text_file(out_dir / (impact ? "table2.csv" : "table3.csv"),
                    meta({{"table", "correlations"},
                          {"dataset", to_string(options.dataset)},
                          {"pairs", pair_columns.substr(1)},
                          {"correlation", kCorrelationNote}}) +
                        body);
  }

  // Quartile transitions for the (weighted, full-count) pair (tables 4/6).
  {
    const Indicator qa = impact ? Indicator::WFI : Indicator::WFO;
    const Indicator qb = impact ? Indicator::I : Indicator::O;
    std::string body = "discipline,from_quartile,to_1,to_2,to_3,to_4\n";
    for (const auto& report : discipline_reports) {
      if (report.a != qa || report.b != qb) continue;
      for (int q = 0; q < 4; ++q) {
        std::vector<std::string> cells = {report.scope_id, std::to_string(q + 1)};
        for (int to = 0; to < 4; ++to)
          cells.push_back(fixed(100.0 * report.quartile_matrix[static_cast<std::size_t>(q)]
                                                              [static_cast<std::size_t>(to)],
                                2));
        body += csv::join(cells) + "\n";
      }
    }
    write_text_file(out_dir / (impact ? "table4.csv" : "table6.csv"),
                    meta({{"table", "quartile_transition"},
                          {"pair", pair_name(qa, qb)},
                          {"cells", "percent of discipline population"}}) +
                        body);
  }

  // Shift descriptive statistics (tables 5/7).
  {
    std::string body = "scope,stat" + pair_columns + "\n";
    auto row = [&](const std::string& scope, const std::string& stat,
                   const std::vector<std::string>& cells) {
      std::vector<std::string> fields_row = {scope, stat};
      fields_row.insert(fields_row.end(), cells.begin(), cells.end());
      body += csv::join(fields_row) + "\n";
    };
    for (const auto& rollup : rollups) {
      std::vector<std::string> avg, max_avg, max_single, min_sd, max_sd;
      for (const auto& pair : rollup.pairs) {
        avg.push_back(fixed(pair.avg_shift, 2));
        max_avg.push_back(tagged(pair.max_avg_shift, 2));
        max_single.push_back(tagged(pair.max_single_shift, 2));
        min_sd.push_back(tagged(pair.min_shift_stddev, 2));
        max_sd.push_back(tagged(pair.max_shift_stddev, 2));
      }
      row(rollup.discipline, "avg_shift", avg);
      row(rollup.discipline, "max_avg_shift", max_avg);
      row(rollup.discipline, "max_shift", max_single);
      row(rollup.discipline, "min_shift_stddev", min_sd);
      row(rollup.discipline, "max_shift_stddev", max_sd);
    }
    std::vector<std::string> avg, max_single;
    for (const auto& report : total_reports) {
      avg.push_back(fixed(report.shifts.stats.mean, 2));
      max_single.push_back(fixed(report.shifts.stats.max, 2));
    }
    row("total", "avg_shift", avg);
    row("total", "max_shift", max_single);
    write_text_file(out_dir / (impact ? "table5.csv" : "table7.csv"),
                    meta({{"table", "shift_stats"},
                          {"dataset", to_string(options.dataset)},
                          {"axis", kShiftAxisNote}}) +
                        body);
  }

  // Top-10% / above-median retention (tables 8/9).
  {
    std::string body = "pair,discipline,no_longer_top10_pct,no_longer_above_median_pct\n";
    for (const auto& [a, b] : pairs) {
      for (const auto& report : discipline_reports) {
        if (report.a != a || report.b != b) continue;
        body += csv::join({pair_name(a, b), report.scope_id,
                           opt_fixed(report.lost_top10, 2, 100.0),
                           opt_fixed(report.lost_above_median, 2, 100.0)}) +
                "\n";
      }
    }
    write_text_file(out_dir / (impact ? "table8.csv" : "table9.csv"),
                    meta({{"table", "retention"}, {"dataset", to_string(options.dataset)}}) +
                        body);
  }

  PipelineSummary summary;
  summary.researchers_in = corpus.researchers.size();
  summary.publications = corpus.publications.size();
  summary.eligible = filtered.corpus.researchers.size();
  summary.excluded = filtered.exclusions.size();
  summary.peer_groups = rankings.groups.size();
  summary.skipped_groups = rankings.skipped.size();
  summary.reports = report_files;
  summary.manifest_hash = manifest_hash;

  if (!options.quiet) {
    std::cout << "loaded " << summary.researchers_in << " researchers, " << summary.publications
              << " publications\n"
              << "eligible " << summary.eligible << " (excluded " << summary.excluded << ")\n"
              << "peer groups " << summary.peer_groups << " (skipped " << summary.skipped_groups
              << ")\n"
              << "wrote " << summary.reports << " comparison reports under " << out_dir.string()
              << " (manifest " << summary.manifest_hash << ")\n";
  }
  return summary;
}

}  // namespace credrank
