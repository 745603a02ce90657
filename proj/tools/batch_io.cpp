#include "batch_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace wedge::cli {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

constexpr std::array<std::string_view, 5> kColumns = {"a1", "b1", "a2", "b2", "T"};

}  // namespace

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double x = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
    return x;
}

Horizon parse_horizon(std::string_view text) {
    if (iequals(trim(text), "inf")) return Horizon::infinite();
    const auto T = parse_number(text);
    if (!T) throw UsageError("horizon '" + std::string(text) + "' is neither a number nor inf");
    return Horizon::finite(*T);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

BatchInput read_batch(std::istream& in) {
    BatchInput input;
    std::string line;
    bool have_header = false;
    std::array<std::size_t, 5> column{};
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
            if (trim(line).empty()) continue;
            for (auto& f : split_csv_line(line)) input.header.emplace_back(trim(f));
            for (std::size_t k = 0; k < kColumns.size(); ++k) {
                const auto it = std::find(input.header.begin(), input.header.end(), kColumns[k]);
                if (it == input.header.end()) {
                    throw UsageError("header lacks column " + std::string(kColumns[k]));
                }
                column[k] = static_cast<std::size_t>(it - input.header.begin());
            }
            have_header = true;
            continue;
        }
        if (trim(line).empty()) continue;
        ParsedRow parsed;
        parsed.fields = split_csv_line(line);
        try {
            if (parsed.fields.size() != input.header.size()) {
                throw UsageError("expected " + std::to_string(input.header.size()) +
                                 " fields, got " + std::to_string(parsed.fields.size()));
            }
            std::array<double, 4> v{};
            for (std::size_t k = 0; k < 4; ++k) {
                const auto& text = parsed.fields[column[k]];
                const auto x = parse_number(text);
                if (!x) {
                    throw UsageError(std::string(kColumns[k]) + " '" + text + "' is not a number");
                }
                v[k] = *x;
            }
            const Horizon h = parse_horizon(parsed.fields[column[4]]);
            parsed.row = BatchRow{WedgeProblem(v[0], v[1], v[2], v[3]), h};
        } catch (const UsageError& e) {
            parsed.error = std::string("parse: ") + e.what();
        } catch (const Error& e) {
            parsed.error = e.what();
        }
        input.rows.push_back(std::move(parsed));
    }
    if (!have_header) throw UsageError("input has no header line");
    return input;
}

void write_batch(std::ostream& out, const BatchInput& input,
                 const std::vector<std::optional<BatchOutcome>>& outcomes) {
    const auto write_fields = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << csv_field(fields[i]);
        }
    };
    write_fields(input.header);
    out << ",prob,method,terms,bound,error\n";
    for (std::size_t i = 0; i < input.rows.size(); ++i) {
        const auto& row = input.rows[i];
        // Short or long rows are cut to the header width so columns line up.
        auto fields = row.fields;
        fields.resize(input.header.size());
        write_fields(fields);
        const auto& outcome = outcomes[i];
        if (outcome && outcome->result) {
            const auto& r = *outcome->result;
            out << ',' << format_double(r.value) << ',' << to_string(r.method) << ',' << r.terms
                << ',' << format_double(r.remainder_bound) << ",\n";
        } else {
            const std::string& error = outcome ? outcome->error : row.error;
            out << ",,,,," << csv_field(error) << '\n';
        }
    }
}

}  // namespace wedge::cli
