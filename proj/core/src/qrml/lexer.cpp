#include <array>
#include <cctype>
#include <charconv>

#include "qrm/qrml/parser.hpp"

namespace qrm::qrml {

namespace {

std::string describe(SourceLocation loc, const std::string& filename, const std::vector<std::string>& expected,
                     const std::string& found) {
  std::string msg = filename + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": ";
  if (!expected.empty()) {
    msg += "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
    msg += "; ";
  }
  return msg + "found " + found;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

SyntaxError::SyntaxError(std::string filename, SourceLocation loc, std::vector<std::string> expected,
                         std::string found)
    : Error(ErrorKind::SyntaxError, describe(loc, filename, expected, found)),
      filename_(std::move(filename)),
      loc_(loc),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

bool is_reserved(std::string_view word) {
  static constexpr std::array<std::string_view, 26> words = {
      "typedef", "channel", "budget",   "int",       "ordered",  "by",       "element-wise",
      "component", "provides", "requires", "input",    "output",   "quality",  "parameter",
      "contains", "or",      "and",      "not",       "in",       "from",     "constraint",
      "bot",     "top",      "true",     "false",     "element"};
  for (auto w : words)
    if (w == word) return true;
  return false;
}

std::vector<Token> tokenize(std::string_view text, std::string_view filename) {
  std::vector<Token> out;
  SourceLocation loc;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count; ++k, ++i) {
      if (text[i] == '\n') {
        ++loc.line;
        loc.column = 1;
      } else {
        ++loc.column;
      }
    }
  };

  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const auto start = loc;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      if (word == "element" && text.substr(j, 5) == "-wise") {
        word = "element-wise";
        j += 5;
      }
      out.push_back({Token::Kind::Identifier, word, start});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, v);
      if (ec != std::errc())
        throw SyntaxError(std::string(filename), start, {"integer in range"}, std::string(text.substr(i, j - i)));
      out.push_back({Token::Kind::Number, std::string(text.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    static constexpr std::array<std::string_view, 4> pairs = {"!=", "<=", ">=", "=>"};
    bool matched = false;
    for (auto p : pairs)
      if (text.substr(i, 2) == p) {
        out.push_back({Token::Kind::Symbol, std::string(p), start});
        advance(2);
        matched = true;
        break;
      }
    if (matched) continue;
    if (std::string_view("(){},:.=<>+-").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Symbol, std::string(1, c), start});
      advance(1);
      continue;
    }
    throw SyntaxError(std::string(filename), start, {}, "unexpected character '" + std::string(1, c) + "'");
  }
  out.push_back({Token::Kind::End, "", loc});
  return out;
}

}  // namespace qrm::qrml
