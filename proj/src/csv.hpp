#pragma once

#include <istream>
#include <string>
#include <vector>

namespace smartpack::detail {

/// RFC 4180 records: quoted fields may hold commas, doubled quotes and
/// newlines. CRLF and LF both end a record. Blank lines are skipped.
std::vector<std::vector<std::string>> read_csv_records(std::istream& in);

}  // namespace smartpack::detail
