#pragma once

// Canonical QRML text. Parsing the output yields an AST equal to the input.

#include <string>

#include "qrm/qrml/ast.hpp"

namespace qrm::qrml {

std::string print(const Expr& e);
std::string print(const TypeDef& t);
std::string print(const ComponentDef& c);
std::string print(const Ast& ast);

}  // namespace qrm::qrml
