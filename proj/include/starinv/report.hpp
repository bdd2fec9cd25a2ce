#ifndef STARINV_REPORT_HPP
#define STARINV_REPORT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace starinv {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct ReportInput {
  std::string path;
  std::string sha256;  // of the normalized source text

  friend bool operator==(const ReportInput&, const ReportInput&) = default;
};

struct RunReport {
  std::string command;
  std::vector<ReportInput> inputs;
  KeyValues config;
  KeyValues result;
  std::string verdict;
  std::optional<double> wall_ms;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Hex SHA-256 of the comment-stripped, whitespace-normalized text.
std::string content_hash(std::string_view source);

/// `key=value` lines in a fixed order: command, inputs, config, result,
/// verdict, wall time. Backslashes and newlines in values are escaped.
std::string emit_machine(const RunReport& r);
/// Throws ParseError on malformed lines.
RunReport parse_machine(std::string_view text);

std::string emit_human(const RunReport& r);

}  // namespace starinv

#endif
