#pragma once

// Configuration spaces, configuration sets and the basic Pareto-algebra
// operations over them. Indices in this API are 0-based.
//
// Dominance reads "c is dominated by c2" as c <= c2 in every dimension, so a
// minimal set keeps the maximal elements: a configuration is dropped once
// some other configuration is at least as good everywhere.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "qrm/value_poset.hpp"

namespace qrm {

struct PosetDescriptor {
  std::string name;
  OrderKind order;

  friend bool operator==(const PosetDescriptor&, const PosetDescriptor&) = default;
};

/// A dimension addressed by position or by name.
using DimRef = std::variant<std::size_t, std::string>;

class ConfigurationSpace {
 public:
  /// Throws ShapeMismatch for zero dimensions, DuplicateName for repeated names.
  explicit ConfigurationSpace(std::vector<PosetDescriptor> dims);
  ConfigurationSpace(std::initializer_list<PosetDescriptor> dims)
      : ConfigurationSpace(std::vector<PosetDescriptor>(dims)) {}

  std::size_t size() const noexcept { return dims_.size(); }
  const std::vector<PosetDescriptor>& dims() const noexcept { return dims_; }
  const PosetDescriptor& operator[](std::size_t i) const { return dims_.at(i); }
  const OrderKind& order(std::size_t i) const { return dims_.at(i).order; }

  /// Throws IndexError when the name or position does not exist.
  std::size_t index_of(const DimRef& ref) const;
  bool has(const std::string& name) const;

  /// Appends a dimension; a clashing name gets a numeric suffix.
  ConfigurationSpace appended(PosetDescriptor dim) const;
  ConfigurationSpace concatenated(const ConfigurationSpace& other) const;
  ConfigurationSpace without(std::size_t k) const;
  ConfigurationSpace renamed(std::size_t k, std::string name) const;

  /// Same arity and same orders position by position; names are not compared.
  bool same_orders(const ConfigurationSpace& other) const;

  std::string to_string() const;

  friend bool operator==(const ConfigurationSpace&, const ConfigurationSpace&) = default;

 private:
  std::vector<PosetDescriptor> dims_;
};

class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Value> values) : values_(std::move(values)) {}
  Configuration(std::initializer_list<Value> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  const Value& operator[](std::size_t i) const { return values_.at(i); }
  const std::vector<Value>& values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  Configuration appended(Value v) const;
  Configuration without(std::size_t k) const;

  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend std::strong_ordering operator<=>(const Configuration& a, const Configuration& b) {
    return std::lexicographical_compare_three_way(a.values_.begin(), a.values_.end(), b.values_.begin(),
                                                  b.values_.end());
  }

 private:
  std::vector<Value> values_;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

/// A finite, duplicate-free set of configurations over one space. Iteration
/// follows insertion order.
class ConfigurationSet {
 public:
  explicit ConfigurationSet(ConfigurationSpace space) : space_(std::move(space)) {}
  ConfigurationSet(ConfigurationSpace space, std::vector<Configuration> configs);

  const ConfigurationSpace& space() const noexcept { return space_; }
  const std::vector<Configuration>& configs() const noexcept { return configs_; }
  std::size_t size() const noexcept { return configs_.size(); }
  bool empty() const noexcept { return configs_.empty(); }
  auto begin() const noexcept { return configs_.begin(); }
  auto end() const noexcept { return configs_.end(); }

  /// Validates arity (ShapeMismatch) and domains (DomainError). Returns false
  /// for a duplicate.
  bool insert(Configuration c);
  bool contains(const Configuration& c) const { return index_.count(c) != 0; }

  /// Configurations in canonical value order.
  std::vector<Configuration> sorted() const;

  /// Same space and the same members regardless of insertion order.
  friend bool operator==(const ConfigurationSet& a, const ConfigurationSet& b);

 private:
  ConfigurationSpace space_;
  std::vector<Configuration> configs_;
  std::unordered_set<Configuration, ConfigurationHash> index_;
};

using Predicate = std::function<bool(const Configuration&)>;
using DerivationFn = std::function<Value(const Configuration&)>;

/// c is dominated by c2: every dimension of c is <= the one of c2.
bool dominates(const ConfigurationSpace& space, const Configuration& c, const Configuration& c2);

/// Simple Cull. Stable: survivors keep input order, the first of equal
/// configurations wins.
ConfigurationSet minimize(const ConfigurationSet& set);

bool is_pareto_minimal(const ConfigurationSet& set);

/// Every member of `lower` is dominated by some member of `upper`.
/// Throws SpaceMismatch when the orders differ.
bool set_dominates(const ConfigurationSet& lower, const ConfigurationSet& upper);

bool equivalent(const ConfigurationSet& a, const ConfigurationSet& b);

ConfigurationSet free_product(const ConfigurationSet& a, const ConfigurationSet& b);
ConfigurationSet free_product(const std::vector<ConfigurationSet>& sets);

ConfigurationSet apply_constraint(const ConfigurationSet& set, const Predicate& admit);

/// A pair (lower, upper) with lower <= upper, lower admitted and upper
/// rejected, if the sample contains one.
std::optional<std::pair<Configuration, Configuration>> find_safety_violation(const Predicate& admit,
                                                                             const ConfigurationSet& sample);
bool check_constraint_safety(const Predicate& admit, const ConfigurationSet& sample);

/// Appends f(c) as a new last dimension described by `target`.
ConfigurationSet derive(const ConfigurationSet& set, const DerivationFn& f, PosetDescriptor target);

/// Sampling check that `f` is monotone (or antitone) from the set's space into
/// `target`. Returns the first offending pair.
std::optional<std::pair<Configuration, Configuration>> find_derivation_violation(
    const ConfigurationSet& sample, const DerivationFn& f, const OrderKind& target, bool antitone = false);

/// Removes dimension k. Throws IndexError for a bad index or when the result
/// would have no dimensions.
ConfigurationSet abstract(const ConfigurationSet& set, const DimRef& k);

/// Removes the first `count` dimensions.
ConfigurationSet abstract_prefix(const ConfigurationSet& set, std::size_t count);

/// Output position i takes source dimension pi[i]. Throws NotABijection.
ConfigurationSet permute(const ConfigurationSet& set, const std::vector<std::size_t>& pi);

/// Union without minimization. Throws SpaceMismatch.
ConfigurationSet alternatives(const std::vector<ConfigurationSet>& sets);

}  // namespace qrm
