#pragma once

#include <nlohmann/json.hpp>
#include <string>

namespace aigrid::config {

/// Parses the TOML subset used by scenario files into a JSON tree.
///
/// Supported: comments, [tables], [[arrays of tables]], dotted and quoted
/// keys, basic and literal strings, integers and floats (with `_`
/// separators, inf and nan), booleans, nested multi-line arrays and inline
/// tables. Dates and multi-line strings are not supported. Errors carry the
/// 1-based line number.
nlohmann::json parse_toml(const std::string& text);

/// Dispatches on content: a document whose first non-blank character is `{`
/// is JSON, anything else is read as TOML.
nlohmann::json parse_config_text(const std::string& text);

/// Reads a file and parses it with parse_config_text.
nlohmann::json read_config_file(const std::string& path);

}  // namespace aigrid::config
