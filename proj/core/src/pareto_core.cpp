#include "qrm/pareto_core.hpp"

#include <algorithm>
#include <numeric>

#include "qrm/error.hpp"

namespace qrm {

// ---------------------------------------------------------------------------
// ConfigurationSpace

ConfigurationSpace::ConfigurationSpace(std::vector<PosetDescriptor> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw Error(ErrorKind::ShapeMismatch, "a configuration space needs at least one dimension");
  for (std::size_t i = 0; i < dims_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (dims_[i].name == dims_[j].name) throw Error(ErrorKind::DuplicateName, "dimension " + dims_[i].name);
}

std::size_t ConfigurationSpace::index_of(const DimRef& ref) const {
  if (const auto* idx = std::get_if<std::size_t>(&ref)) {
    if (*idx >= dims_.size())
      throw Error(ErrorKind::IndexError,
                  "dimension " + std::to_string(*idx) + " out of range for arity " + std::to_string(dims_.size()));
    return *idx;
  }
  const auto& name = std::get<std::string>(ref);
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (dims_[i].name == name) return i;
  throw Error(ErrorKind::IndexError, "no dimension named " + name + " in " + to_string());
}

bool ConfigurationSpace::has(const std::string& name) const {
  return std::any_of(dims_.begin(), dims_.end(), [&](const auto& d) { return d.name == name; });
}

ConfigurationSpace ConfigurationSpace::appended(PosetDescriptor dim) const {
  if (has(dim.name)) {
    const std::string base = dim.name;
    for (int k = 2;; ++k) {
      dim.name = base + "_" + std::to_string(k);
      if (!has(dim.name)) break;
    }
  }
  auto dims = dims_;
  dims.push_back(std::move(dim));
  return ConfigurationSpace(std::move(dims));
}

ConfigurationSpace ConfigurationSpace::concatenated(const ConfigurationSpace& other) const {
  ConfigurationSpace out = *this;
  for (const auto& d : other.dims_) out = out.appended(d);
  return out;
}

ConfigurationSpace ConfigurationSpace::without(std::size_t k) const {
  if (k >= dims_.size()) throw Error(ErrorKind::IndexError, "abstraction index " + std::to_string(k));
  if (dims_.size() == 1) throw Error(ErrorKind::IndexError, "abstraction would leave no dimensions");
  auto dims = dims_;
  dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(k));
  return ConfigurationSpace(std::move(dims));
}

ConfigurationSpace ConfigurationSpace::renamed(std::size_t k, std::string name) const {
  auto dims = dims_;
  dims.at(k).name = std::move(name);
  return ConfigurationSpace(std::move(dims));
}

bool ConfigurationSpace::same_orders(const ConfigurationSpace& other) const {
  if (dims_.size() != other.dims_.size()) return false;
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (!(dims_[i].order == other.dims_[i].order)) return false;
  return true;
}

std::string ConfigurationSpace::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) out += ", ";
    out += dims_[i].name + ":" + dims_[i].order.to_string();
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Configuration / ConfigurationSet

Configuration Configuration::appended(Value v) const {
  auto values = values_;
  values.push_back(std::move(v));
  return Configuration(std::move(values));
}

Configuration Configuration::without(std::size_t k) const {
  auto values = values_;
  values.erase(values.begin() + static_cast<std::ptrdiff_t>(k));
  return Configuration(std::move(values));
}

std::string Configuration::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ", ";
    out += values_[i].to_string();
  }
  return out + ")";
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::size_t h = c.size();
  for (const auto& v : c) h ^= hash_value(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

ConfigurationSet::ConfigurationSet(ConfigurationSpace space, std::vector<Configuration> configs)
    : space_(std::move(space)) {
  configs_.reserve(configs.size());
  for (auto& c : configs) insert(std::move(c));
}

bool ConfigurationSet::insert(Configuration c) {
  if (c.size() != space_.size())
    throw Error(ErrorKind::ShapeMismatch, "configuration " + c.to_string() + " does not fit " + space_.to_string());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!inhabits(space_.order(i), c[i]))
      throw Error(ErrorKind::DomainError, c[i].to_string() + " is not in dimension " + space_[i].name + " (" +
                                              space_.order(i).to_string() + ")");
  if (!index_.insert(c).second) return false;
  configs_.push_back(std::move(c));
  return true;
}

std::vector<Configuration> ConfigurationSet::sorted() const {
  auto out = configs_;
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const ConfigurationSet& a, const ConfigurationSet& b) {
  if (!(a.space_ == b.space_) || a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const Configuration& c) { return b.contains(c); });
}

// ---------------------------------------------------------------------------
// Operations

namespace {

void require_same_orders(const ConfigurationSpace& a, const ConfigurationSpace& b) {
  if (!a.same_orders(b))
    throw Error(ErrorKind::SpaceMismatch, "spaces differ: " + a.to_string() + " vs " + b.to_string());
}

}  // namespace

bool dominates(const ConfigurationSpace& space, const Configuration& c, const Configuration& c2) {
  if (c.size() != space.size() || c2.size() != space.size())
    throw Error(ErrorKind::ShapeMismatch, "configuration arity does not match " + space.to_string());
  for (std::size_t i = 0; i < space.size(); ++i)
    if (!leq(space.order(i), c[i], c2[i])) return false;
  return true;
}

ConfigurationSet minimize(const ConfigurationSet& set) {
  const auto& space = set.space();
  std::vector<Configuration> window;
  for (const auto& c : set) {
    const bool covered =
        std::any_of(window.begin(), window.end(), [&](const Configuration& w) { return dominates(space, c, w); });
    if (covered) continue;
    std::erase_if(window, [&](const Configuration& w) { return dominates(space, w, c); });
    window.push_back(c);
  }
  return ConfigurationSet(space, std::move(window));
}

bool is_pareto_minimal(const ConfigurationSet& set) {
  const auto& cs = set.configs();
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (i != j && dominates(set.space(), cs[i], cs[j])) return false;
  return true;
}

bool set_dominates(const ConfigurationSet& lower, const ConfigurationSet& upper) {
  require_same_orders(lower.space(), upper.space());
  return std::all_of(lower.begin(), lower.end(), [&](const Configuration& c) {
    return std::any_of(upper.begin(), upper.end(),
                       [&](const Configuration& u) { return dominates(lower.space(), c, u); });
  });
}

bool equivalent(const ConfigurationSet& a, const ConfigurationSet& b) {
  return set_dominates(a, b) && set_dominates(b, a);
}

ConfigurationSet free_product(const ConfigurationSet& a, const ConfigurationSet& b) {
  ConfigurationSet out(a.space().concatenated(b.space()));
  for (const auto& x : a) {
    for (const auto& y : b) {
      auto values = x.values();
      values.insert(values.end(), y.begin(), y.end());
      out.insert(Configuration(std::move(values)));
    }
  }
  return out;
}

ConfigurationSet free_product(const std::vector<ConfigurationSet>& sets) {
  if (sets.empty()) throw Error(ErrorKind::InvalidArgument, "free product of no sets");
  ConfigurationSet out = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) out = free_product(out, sets[i]);
  return out;
}

ConfigurationSet apply_constraint(const ConfigurationSet& set, const Predicate& admit) {
  ConfigurationSet out(set.space());
  for (const auto& c : set)
    if (admit(c)) out.insert(c);
  return out;
}

std::optional<std::pair<Configuration, Configuration>> find_safety_violation(const Predicate& admit,
                                                                             const ConfigurationSet& sample) {
  std::vector<char> admitted;
  admitted.reserve(sample.size());
  for (const auto& c : sample) admitted.push_back(admit(c) ? 1 : 0);
  const auto& cs = sample.configs();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!admitted[i]) continue;
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (!admitted[j] && dominates(sample.space(), cs[i], cs[j])) return std::make_pair(cs[i], cs[j]);
  }
  return std::nullopt;
}

bool check_constraint_safety(const Predicate& admit, const ConfigurationSet& sample) {
  return !find_safety_violation(admit, sample).has_value();
}

ConfigurationSet derive(const ConfigurationSet& set, const DerivationFn& f, PosetDescriptor target) {
  ConfigurationSet out(set.space().appended(std::move(target)));
  for (const auto& c : set) out.insert(c.appended(f(c)));
  return out;
}

std::optional<std::pair<Configuration, Configuration>> find_derivation_violation(
    const ConfigurationSet& sample, const DerivationFn& f, const OrderKind& target, bool antitone) {
  std::vector<Value> images;
  images.reserve(sample.size());
  for (const auto& c : sample) images.push_back(f(c));
  const auto& cs = sample.configs();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (i == j || !dominates(sample.space(), cs[i], cs[j])) continue;
      const bool ok = antitone ? leq(target, images[j], images[i]) : leq(target, images[i], images[j]);
      if (!ok) return std::make_pair(cs[i], cs[j]);
    }
  }
  return std::nullopt;
}

ConfigurationSet abstract(const ConfigurationSet& set, const DimRef& k) {
  const auto idx = set.space().index_of(k);
  ConfigurationSet out(set.space().without(idx));
  for (const auto& c : set) out.insert(c.without(idx));
  return out;
}

ConfigurationSet abstract_prefix(const ConfigurationSet& set, std::size_t count) {
  if (count >= set.space().size())
    throw Error(ErrorKind::IndexError, "cannot abstract " + std::to_string(count) + " of " +
                                           std::to_string(set.space().size()) + " dimensions");
  std::vector<PosetDescriptor> dims(set.space().dims().begin() + static_cast<std::ptrdiff_t>(count),
                                    set.space().dims().end());
  ConfigurationSet out{ConfigurationSpace(std::move(dims))};
  for (const auto& c : set)
    out.insert(Configuration(std::vector<Value>(c.begin() + static_cast<std::ptrdiff_t>(count), c.end())));
  return out;
}

ConfigurationSet permute(const ConfigurationSet& set, const std::vector<std::size_t>& pi) {
  const auto n = set.space().size();
  std::vector<char> seen(n, 0);
  if (pi.size() != n) throw Error(ErrorKind::NotABijection, "permutation has the wrong length");
  for (auto p : pi) {
    if (p >= n || seen[p]) throw Error(ErrorKind::NotABijection, "not a permutation of the dimensions");
    seen[p] = 1;
  }
  std::vector<PosetDescriptor> dims;
  dims.reserve(n);
  for (auto p : pi) dims.push_back(set.space()[p]);
  ConfigurationSet out{ConfigurationSpace(std::move(dims))};
  for (const auto& c : set) {
    std::vector<Value> values;
    values.reserve(n);
    for (auto p : pi) values.push_back(c[p]);
    out.insert(Configuration(std::move(values)));
  }
  return out;
}

ConfigurationSet alternatives(const std::vector<ConfigurationSet>& sets) {
  if (sets.empty()) throw Error(ErrorKind::InvalidArgument, "alternatives of no sets");
  ConfigurationSet out = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) {
    require_same_orders(out.space(), sets[i].space());
    for (const auto& c : sets[i]) out.insert(c);
  }
  return out;
}

}  // namespace qrm
