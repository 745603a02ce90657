#pragma once

#include "wedge/engine.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace wedge::cli {

/// Raised for input the command line or a CSV header cannot make sense of.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Whole-string decimal parse, surrounding blanks allowed; nullopt otherwise.
[[nodiscard]] std::optional<double> parse_number(std::string_view text);

/// "inf" in any case is the infinite horizon. A malformed number is a
/// UsageError; a number that is not a valid horizon is a DomainError.
[[nodiscard]] Horizon parse_horizon(std::string_view text);

/// 17 significant digits, enough to read the same double back.
[[nodiscard]] std::string format_double(double x);

/// Comma separated fields with optional double quotes ("" inside quotes).
[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line);
[[nodiscard]] std::string csv_field(std::string_view text);

struct ParsedRow {
    std::vector<std::string> fields;  ///< as read, echoed to the output
    std::optional<BatchRow> row;
    std::string error;  ///< set when row is empty
};

struct BatchInput {
    std::vector<std::string> header;
    std::vector<ParsedRow> rows;
};

/// Needs a header naming a1, b1, a2, b2 and T (any order, extra columns
/// kept). Throws UsageError when the header is missing or incomplete; bad
/// data rows only mark the row.
[[nodiscard]] BatchInput read_batch(std::istream& in);

/// Header plus prob, method, terms, bound, error; one line per input row.
void write_batch(std::ostream& out, const BatchInput& input,
                 const std::vector<std::optional<BatchOutcome>>& outcomes);

}  // namespace wedge::cli
