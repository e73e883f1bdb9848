#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace credrank::csv {

// Reads one CSV record (RFC-4180 quoting, "" escapes; quoted fields may span
// lines). Returns false on clean EOF. line_no tracks the physical line the
// record started on, for diagnostics.
bool read_record(std::istream& in, std::vector<std::string>& fields, const std::string& file,
                 long& line_no);

std::string escape(const std::string& field);
std::string join(const std::vector<std::string>& fields);

// Numeric cell formatting: 10 significant digits, locale-independent.
std::string number(double value);

}  // namespace credrank::csv
