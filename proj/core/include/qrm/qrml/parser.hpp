#pragma once

// Lexer and recursive-descent parser for QRML.
//
//   model      := (typedef | component)*
//   typedef    := ("typedef" | "channel" | "budget") NAME ":" body order?
//   body       := "int" | NAME | "(" field ("," field)* ")"
//   field      := NAME ":" ("int" | NAME)
//   order      := "element-wise" | "ordered" "by" pattern "," pattern "=>" expr
//   pattern    := NAME | "(" NAME ("," NAME)* ")"
//   component  := "component" NAME "{" (port | contains | constraint)* "}"
//   port       := direction NAME ":" type ("{" expr ("," expr)* "}")? ("from" expr)?
//   contains   := "contains" inst ("or" inst)*
//   inst       := (NAME ":")? NAME
//   constraint := "constraint" expr
//
// Expressions: or, and, not, comparisons (= != <= >= < >), "in {e, ...}",
// + and -, unary -, integers, bot, top, dotted paths and tuples.
// Line comments start with //.

#include <string>
#include <string_view>
#include <vector>

#include "qrm/error.hpp"
#include "qrm/qrml/ast.hpp"

namespace qrm::qrml {

struct Token {
  enum class Kind { Identifier, Number, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  SourceLocation loc;
};

/// Throws SyntaxError on an unexpected character or an out-of-range number.
std::vector<Token> tokenize(std::string_view text, std::string_view filename = "<input>");

class SyntaxError : public Error {
 public:
  SyntaxError(std::string filename, SourceLocation loc, std::vector<std::string> expected, std::string found);

  const std::string& filename() const noexcept { return filename_; }
  SourceLocation location() const noexcept { return loc_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::string filename_;
  SourceLocation loc_;
  std::vector<std::string> expected_;
  std::string found_;
};

Ast parse(std::string_view text, std::string_view filename = "<input>");

/// A single expression, e.g. for constraints given on the command line.
ExprPtr parse_expression(std::string_view text, std::string_view filename = "<expr>");

/// Words that cannot be used as names.
bool is_reserved(std::string_view word);

}  // namespace qrm::qrml
