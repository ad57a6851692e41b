#pragma once

// The six-part QRM interface and the composition patterns built on it:
// alternatives, aggregation (derivation and constraint forms) and the free,
// horizontal and vertical aggregation templates.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qrm/pareto_core.hpp"

namespace qrm {

enum class Part { Input = 0, Output, Required, Provided, Quality, Parameters };

inline constexpr std::array<std::string_view, 6> kPartNames = {"input",    "output",  "required",
                                                               "provided", "quality", "parameters"};

using PartOrders = std::array<OrderKind, 6>;
using PartValues = std::array<Value, 6>;

/// Space with the canonical part names.
ConfigurationSpace interface_space(const PartOrders& orders);

/// All six parts void.
PartOrders void_parts();

class QRMInterface {
 public:
  /// Takes any six-dimensional set and renames its dimensions to the part
  /// names. Throws ShapeMismatch for another arity.
  explicit QRMInterface(const ConfigurationSet& set);
  QRMInterface(const PartOrders& orders, const std::vector<PartValues>& configs);

  const ConfigurationSet& set() const noexcept { return set_; }
  const ConfigurationSpace& space() const noexcept { return set_.space(); }
  const OrderKind& order(Part p) const { return set_.space().order(static_cast<std::size_t>(p)); }
  PartOrders orders() const;
  std::size_t size() const noexcept { return set_.size(); }
  bool empty() const noexcept { return set_.empty(); }
  auto begin() const noexcept { return set_.begin(); }
  auto end() const noexcept { return set_.end(); }

  friend bool operator==(const QRMInterface& a, const QRMInterface& b) { return a.set_ == b.set_; }

 private:
  ConfigurationSet set_;
};

/// A step that appends one derived dimension to the evolving space (or, for
/// `drop`, removes one). Dimensions are addressed by position or name; the
/// appended dimension takes the name given with `named`, if any.
class DerivationSpec {
 public:
  enum class Kind {
    Copy, Group, Ungroup, Void, Add, Mult, Min, Max, Sub, Div, PosetAdd, PosetSub, Concat, Drop, Custom
  };
  using CustomFn = std::function<Value(const Configuration&, const ConfigurationSpace&)>;

  static DerivationSpec copy(DimRef i);
  /// Groups the inclusive position range i..j into one element-wise dimension.
  static DerivationSpec group(DimRef i, DimRef j);
  /// Part j (0-based) of the element-wise dimension i.
  static DerivationSpec ungroup(DimRef i, std::size_t j);
  static DerivationSpec void_();
  static DerivationSpec add(DimRef i, DimRef j);
  static DerivationSpec mult(DimRef i, DimRef j);
  static DerivationSpec min(DimRef i, DimRef j);
  static DerivationSpec max(DimRef i, DimRef j);
  /// Producer p (under <=) minus consumer c (under >=) of the same domain.
  static DerivationSpec sub(DimRef p, DimRef c);
  static DerivationSpec div(DimRef p, DimRef c);
  static DerivationSpec poset_add(DimRef i, DimRef j);
  static DerivationSpec poset_sub(DimRef p, DimRef c);
  /// Flattened tuple of the two dimensions' leaves; void contributes nothing.
  static DerivationSpec concat(DimRef i, DimRef j);
  static DerivationSpec drop(DimRef i);
  static DerivationSpec custom(CustomFn fn, OrderKind target, std::string label = "custom");

  /// Name for the appended dimension.
  DerivationSpec named(std::string name) const;

  Kind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }

  ConfigurationSet apply(const ConfigurationSet& set) const;

 private:
  DerivationSpec(Kind kind, std::vector<DimRef> refs) : kind_(kind), refs_(std::move(refs)) {}

  Kind kind_;
  std::vector<DimRef> refs_;
  std::size_t sub_index_ = 0;
  CustomFn fn_;
  std::optional<OrderKind> target_;
  std::string label_;
  std::string name_;
};

using Pipeline = std::vector<DerivationSpec>;

ConfigurationSet apply_pipeline(const ConfigurationSet& set, const Pipeline& steps);

class ConstraintSpec {
 public:
  using ValueFn = std::function<Value(const Value&)>;
  using CustomPred = std::function<bool(const Configuration&, const ConfigurationSpace&)>;

  /// Admits configurations where f(consumer) <= producer under the producer's
  /// order. `f` defaults to the identity.
  static ConstraintSpec producer_consumer(DimRef p, DimRef c, ValueFn f = {});
  /// Admits configurations whose dimension i is in X. Dimension i must be
  /// ordered by equality (OrderError otherwise).
  static ConstraintSpec subset(DimRef i, std::vector<Value> allowed);
  static ConstraintSpec custom(CustomPred pred, std::string label = "custom");

  /// Resolves dimension references against `space`.
  Predicate bind(const ConfigurationSpace& space) const;
  ConfigurationSet apply(const ConfigurationSet& set) const { return apply_constraint(set, bind(set.space())); }

 private:
  enum class Kind { ProducerConsumer, Subset, Custom };
  explicit ConstraintSpec(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<DimRef> refs_;
  ValueFn f_;
  std::vector<Value> allowed_;
  CustomPred pred_;
  std::string label_;
};

/// Constraint form of a normalization: for each source configuration,
/// `candidates` proposes target part values (the finite slice of the target
/// space that can satisfy the constraint) and `admit` decides on the joined
/// source-then-target configuration.
struct ConstraintNormalization {
  PartOrders target;
  std::function<std::vector<PartValues>(const Configuration&, const ConfigurationSpace&)> candidates;
  std::function<bool(const Configuration&, const ConfigurationSpace&)> admit;
};

using Normalization = std::variant<std::array<Pipeline, 6>, ConstraintNormalization>;

struct AlternativeBranch {
  QRMInterface iface;
  Normalization normalization;
};

struct AlternativesSpec {
  std::vector<AlternativeBranch> branches;
  PartOrders target;
};

/// Identity pipelines: copy every part.
std::array<Pipeline, 6> copy_parts();

QRMInterface apply_alternatives(const AlternativesSpec& spec);

/// Constituent k (1-based) contributes dimensions "c<k>.input" ... "c<k>.parameters".
struct AggregationSpec {
  std::vector<QRMInterface> constituents;
  std::vector<ConstraintSpec> pre_constraints;
  Normalization parts;
  std::vector<ConstraintSpec> post_constraints;
};

QRMInterface apply_aggregation(const AggregationSpec& spec);

/// Name of a constituent dimension, e.g. part_ref(2, Part::Input) == "c2.input".
std::string part_ref(std::size_t constituent, Part p);

enum class ParameterMode { Void, Add };

struct TemplateOptions {
  std::vector<ConstraintSpec> pre;
  std::vector<ConstraintSpec> post;
  ParameterMode parameters = ParameterMode::Add;
};

QRMInterface free_aggregate(const QRMInterface& a, const QRMInterface& b, const TemplateOptions& opts = {});
/// a's output feeds b's input. Throws OrderMismatch unless the output order
/// is the dual of the input order.
QRMInterface horizontal_aggregate(const QRMInterface& a, const QRMInterface& b, const TemplateOptions& opts = {});
/// a provides budget to b. Throws OrderMismatch unless the provided order is
/// the dual of the required order.
QRMInterface vertical_aggregate(const QRMInterface& a, const QRMInterface& b, const TemplateOptions& opts = {});

}  // namespace qrm
