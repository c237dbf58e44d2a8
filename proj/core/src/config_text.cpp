#include "aigrid/config_text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "aigrid/error.hpp"

namespace aigrid::config {

using nlohmann::json;

namespace {

class TomlReader {
 public:
  explicit TomlReader(const std::string& text) : text_(text) {}

  json parse() {
    json root = json::object();
    json* current = &root;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        current = parse_header(root);
      } else {
        parse_key_value(*current);
      }
      expect_line_end();
    }
    return root;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  // Tables opened by explicit headers may not be reopened; keyed by path
  // with array indices so that growing arrays cannot alias entries.
  std::vector<std::string> defined_tables_;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  char get() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) get();
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') get();
    }
  }

  void skip_blank_lines() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r') get();
      if (peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }

  // Whitespace, newlines and comments inside arrays.
  void skip_array_filler() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r' || peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }

  void expect_line_end() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') get();
    if (at_end()) return;
    if (peek() != '\n') fail(std::string("unexpected character '") + peek() + "' after value");
    get();
  }

  static bool bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::vector<std::string> parse_key() {
    std::vector<std::string> parts;
    while (true) {
      skip_spaces();
      if (peek() == '"') {
        parts.push_back(parse_basic_string());
      } else if (peek() == '\'') {
        parts.push_back(parse_literal_string());
      } else {
        std::string part;
        while (!at_end() && bare_key_char(peek())) part.push_back(get());
        if (part.empty()) fail("expected a key");
        parts.push_back(part);
      }
      skip_spaces();
      if (peek() != '.') break;
      get();
    }
    return parts;
  }

  // Steps into table[key], entering the last element of an array of tables.
  // Appends the step to `identity` when given.
  json* descend(json& table, const std::string& key, std::string* identity = nullptr) {
    if (!table.contains(key)) table[key] = json::object();
    json* node = &table[key];
    if (identity) *identity += key;
    if (node->is_array()) {
      if (node->empty() || !node->back().is_object()) fail("key '" + key + "' is not a table");
      if (identity) *identity += "[" + std::to_string(node->size() - 1) + "]";
      node = &node->back();
    }
    if (!node->is_object()) fail("key '" + key + "' is already defined as a value");
    if (identity) *identity += ".";
    return node;
  }

  json* parse_header(json& root) {
    get();  // '['
    const bool array_table = peek() == '[';
    if (array_table) get();
    const auto path = parse_key();
    if (get() != ']') fail("expected ']' to close table header");
    if (array_table && get() != ']') fail("expected ']]' to close array-of-tables header");

    json* node = &root;
    std::string identity;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) node = descend(*node, path[i], &identity);
    const std::string& last = path.back();
    if (array_table) {
      if (!node->contains(last)) (*node)[last] = json::array();
      json& arr = (*node)[last];
      if (!arr.is_array()) fail("key '" + last + "' is not an array of tables");
      arr.push_back(json::object());
      return &arr.back();
    }
    json* table = descend(*node, last, &identity);
    for (const std::string& seen : defined_tables_) {
      if (seen == identity) fail("table '" + last + "' defined twice");
    }
    defined_tables_.push_back(identity);
    return table;
  }

  void parse_key_value(json& table) {
    const auto path = parse_key();
    skip_spaces();
    if (get() != '=') fail("expected '=' after key");
    skip_spaces();
    json value = parse_value();
    json* node = &table;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) node = descend(*node, path[i]);
    if (node->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*node)[path.back()] = std::move(value);
  }

  json parse_value() {
    const char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (text_.compare(pos_, 4, "true") == 0 && !bare_key_char(peek(4))) {
      pos_ += 4;
      return true;
    }
    if (text_.compare(pos_, 5, "false") == 0 && !bare_key_char(peek(5))) {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  std::string parse_basic_string() {
    get();  // opening quote
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      const char e = get();
      switch (e) {
        case '"':
          out.push_back('"');
          break;
        case '\\':
          out.push_back('\\');
          break;
        case 'n':
          out.push_back('\n');
          break;
        case 't':
          out.push_back('\t');
          break;
        case 'r':
          out.push_back('\r');
          break;
        default:
          fail(std::string("unsupported escape '\\") + e + "'");
      }
    }
    return out;
  }

  std::string parse_literal_string() {
    get();
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '\'') break;
      out.push_back(c);
    }
    return out;
  }

  json parse_array() {
    get();  // '['
    json arr = json::array();
    while (true) {
      skip_array_filler();
      if (peek() == ']') {
        get();
        return arr;
      }
      arr.push_back(parse_value());
      skip_array_filler();
      if (peek() == ',') {
        get();
        continue;
      }
      if (peek() == ']') {
        get();
        return arr;
      }
      fail("expected ',' or ']' in array");
    }
  }

  json parse_inline_table() {
    get();  // '{'
    json table = json::object();
    skip_spaces();
    if (peek() == '}') {
      get();
      return table;
    }
    while (true) {
      skip_spaces();
      parse_key_value(table);
      skip_spaces();
      const char c = at_end() ? '\0' : get();
      if (c == '}') return table;
      if (c != ',') fail("expected ',' or '}' in inline table");
    }
  }

  json parse_number() {
    std::string token;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' || c == '_') {
        token.push_back(get());
      } else {
        break;
      }
    }
    if (token.empty()) fail("expected a value");
    std::string clean;
    for (std::size_t i = 0; i < token.size(); ++i) {
      if (token[i] == '_') {
        if (i == 0 || i + 1 == token.size() || !std::isdigit(static_cast<unsigned char>(token[i - 1])) ||
            !std::isdigit(static_cast<unsigned char>(token[i + 1]))) {
          fail("misplaced '_' in number '" + token + "'");
        }
        continue;
      }
      clean.push_back(token[i]);
    }
    std::string body = clean;
    bool negative = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      negative = body[0] == '-';
      body.erase(0, 1);
    }
    if (body == "inf") return negative ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = clean.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
      if (ec != std::errc() || ptr != body.data() + body.size()) fail("invalid number '" + token + "'");
      return negative ? -v : v;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || ptr != body.data() + body.size()) fail("invalid number '" + token + "'");
    return negative ? -v : v;
  }
};

}  // namespace

json parse_toml(const std::string& text) { return TomlReader(text).parse(); }

json parse_config_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(0, std::string("invalid JSON: ") + e.what());
    }
  }
  return parse_toml(text);
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace aigrid::config
