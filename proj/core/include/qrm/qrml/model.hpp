#pragma once

// Elaboration and evaluation of QRML models.
//
// Every type elaborates to a shape: a leaf poset or a record of named fields.
// Records are compared element-wise and flatten into their leaves when used
// as a port. An `ordered by` predicate that is a conjunction of one relation
// per field (=, <= or >=) is itself an element-wise order and flattens the
// same way; any other predicate yields a single leaf with a custom order.
//
// A component's part value is the concatenation of the leaves of its ports
// for that part: void without ports, the bare leaf for one leaf, a tuple
// otherwise. `requires` and `input` ports are stored under the dual order so
// that, as for every interface, larger is better in all six parts.
//
// Evaluation is the product of the contained components' configuration sets
// with the component's own ports, filtered by all constraints and projected
// onto the own ports. Own ports must be pinned to finitely many values by
// `port = expr`, `port in {...}` or a `from` clause. Each `contains ... or`
// choice is evaluated separately, without the constraints that mention an
// instance outside the choice, and the results are united and minimized.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qrm/qrm_interface.hpp"
#include "qrm/qrml/ast.hpp"

namespace qrm::qrml {

class Model {
 public:
  /// Elaborates types and checks components: names, type references,
  /// contained components, expression paths and acyclic containment.
  explicit Model(Ast ast, std::string filename = "<input>");

  static Model from_source(std::string_view text, std::string filename = "<input>");

  const Ast& ast() const;
  bool has_component(const std::string& name) const;
  std::vector<std::string> component_names() const;

  /// The poset of a declared type (element-wise over its leaves for records).
  PosetDescriptor type(const std::string& name) const;

  /// Memoized; throws UnknownComponent and UnboundedDomain.
  QRMInterface evaluate(const std::string& component) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Predicate over configurations of `space`. Paths in `e` are dimension names
/// (a dotted path is joined with '.'), comparisons use the dimension orders.
Predicate compile_predicate(const ExprPtr& e, const ConfigurationSpace& space);

}  // namespace qrm::qrml
