#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace credrank {

// Base class for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input row or value. Carries the source location when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, std::string file = {}, long line = 0)
      : Error(line > 0 ? file + ":" + std::to_string(line) + ": " + message
                       : (file.empty() ? message : file + ": " + message)),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  long line() const { return line_; }

 private:
  std::string file_;
  long line_;
};

class DuplicateId : public Error {
 public:
  explicit DuplicateId(const std::string& id) : Error("duplicate id '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class DanglingReference : public Error {
 public:
  DanglingReference(const std::string& id, const std::string& context)
      : Error("byline references unknown researcher '" + id + "' (" + context + ")"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class EmptyByline : public Error {
 public:
  EmptyByline() : Error("publication byline is empty") {}
};

class MissingBaseline : public Error {
 public:
  MissingBaseline(int year, const std::string& category)
      : Error("no citation baseline for year " + std::to_string(year) + ", category '" + category + "'"),
        year_(year),
        category_(category) {}
  int year() const { return year_; }
  const std::string& category() const { return category_; }

 private:
  int year_;
  std::string category_;
};

class GroupTooSmall : public Error {
 public:
  explicit GroupTooSmall(std::size_t size)
      : Error("peer group has " + std::to_string(size) + " member(s); need at least 2") {}
};

class KeyMismatch : public Error {
 public:
  using Error::Error;
};

class EmptySelection : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class EmptyResult : public Error {
 public:
  using Error::Error;
};

enum class AcademicRank { Full, Associate, Assistant };
enum class DocType { Article, Review, ProceedingsPaper };
enum class DatasetKind { Output, Impact };

// The six productivity indicators, in scorecard column order.
enum class Indicator { WFO, FO, O, WFI, FI, I };

inline constexpr int kIndicatorCount = 6;

const std::string& to_string(AcademicRank rank);
const std::string& to_string(DocType type);
const std::string& to_string(DatasetKind kind);
const std::string& to_string(Indicator ind);

AcademicRank academic_rank_from(const std::string& text);
DocType doc_type_from(const std::string& text);
DatasetKind dataset_kind_from(const std::string& text);
Indicator indicator_from(const std::string& text);

inline std::size_t index_of(Indicator ind) { return static_cast<std::size_t>(ind); }

// "WFI-I" style label for a ranking-list pair.
std::string pair_name(Indicator a, Indicator b);

// The three indicator pairs studied per dataset kind, in report column order.
std::vector<std::pair<Indicator, Indicator>> dataset_pairs(DatasetKind kind);

struct Researcher {
  std::string id;
  std::string university_id;
  std::string field_code;       // SDS, e.g. "BIO/18"
  std::string discipline_code;  // UDA, e.g. "Biology"
  AcademicRank rank = AcademicRank::Assistant;
  int years_active = 1;  // years worked inside the observation window

  bool operator==(const Researcher&) const = default;
};

struct AuthorSlot {
  int position = 1;                          // 1-based byline index
  std::optional<std::string> researcher_id;  // absent = external author
  std::string university_id;

  bool operator==(const AuthorSlot&) const = default;
};

struct CategoryShare {
  std::string name;
  double weight = 1.0;  // in (0,1]; weights of one publication sum to 1

  bool operator==(const CategoryShare&) const = default;
};

struct Publication {
  std::string id;
  int year = 0;
  DocType doc_type = DocType::Article;
  std::int64_t citations = 0;  // as of the census date, pre-counted upstream
  std::vector<CategoryShare> categories;
  std::vector<AuthorSlot> byline;

  bool operator==(const Publication&) const = default;
};

struct YearWindow {
  int first = 0;
  int last = 0;

  bool operator==(const YearWindow&) const = default;
};

struct Corpus {
  std::vector<Researcher> researchers;
  std::vector<Publication> publications;
  YearWindow window;  // derived: min/max publication year

  bool operator==(const Corpus&) const = default;

  // id -> index into researchers. Rebuilt on demand; the corpus itself is
  // immutable after load.
  std::map<std::string, std::size_t> researcher_index() const;
};

struct EligibilityConfig {
  int min_years = 3;
  int min_per_rank = 10;
  double min_publishing_share = 0.5;
  DatasetKind dataset_kind = DatasetKind::Output;
};

struct Exclusion {
  std::string entity_kind;  // currently always "researcher"
  std::string entity_id;
  std::string rule;
};

using ExclusionLog = std::vector<Exclusion>;

}  // namespace credrank
