#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace netml::csv {

/// RFC-4180 field quoting: quote when the field holds a comma, quote, CR or LF.
std::string quote(std::string_view field);

/// Writes one record terminated by LF.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Parses RFC-4180 records (quoted fields may span lines). Accepts LF or CRLF.
std::vector<std::vector<std::string>> parse(std::istream& in);

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

}  // namespace netml::csv
