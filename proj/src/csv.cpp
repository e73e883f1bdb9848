#include "credrank/csv.hpp"

#include <istream>

#include "credrank/types.hpp"

namespace credrank::csv {

bool read_record(std::istream& in, std::vector<std::string>& fields, const std::string& file,
                 long& line_no) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  ++line_no;
  const long record_line = line_no;

  std::string field;
  bool quoted = false;
  bool at_field_start = true;

  auto push_field = [&] {
    fields.push_back(field);
    field.clear();
    at_field_start = true;
  };

  while (true) {
    if (c == EOF) {
      if (quoted) throw ParseError("unterminated quoted field", file, record_line);
      push_field();
      return true;
    }
    if (quoted) {
      if (c == '"') {
        int next = in.get();
        if (next == '"') {
          field.push_back('"');
        } else {
          quoted = false;
          if (next != EOF) in.unget();
        }
      } else {
        if (c == '\n') ++line_no;
        field.push_back(static_cast<char>(c));
      }
    } else if (c == '"') {
      if (!at_field_start)
        throw ParseError("unexpected quote inside unquoted field", file, record_line);
      quoted = true;
      at_field_start = false;
    } else if (c == ',') {
      push_field();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      push_field();
      return true;
    } else {
      field.push_back(static_cast<char>(c));
      at_field_start = false;
    }
    c = in.get();
  }
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out.push_back(',');
    out += escape(fields[k]);
  }
  return out;
}

std::string number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

}  // namespace credrank::csv
