#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace mva {

/// Full-precision decimal form of x ("%.17g"): round-trips exactly and keeps
/// repeated runs byte-identical.
std::string format_double(double x);

/// Joins fields with commas (no quoting; writers must not emit commas inside
/// fields).
std::string csv_join(const std::vector<std::string>& fields);

/// Splits CSV text into rows of fields. Plain comma splitting with trailing
/// '\r' stripped; blank lines are dropped. No quoting rules.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// Writes content to path, creating parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

/// Two-space-indented JSON with a trailing newline. Object keys are emitted
/// in sorted order, so equal documents produce equal bytes.
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace mva
