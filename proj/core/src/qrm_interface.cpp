#include "qrm/qrm_interface.hpp"

#include <algorithm>

#include "qrm/error.hpp"

namespace qrm {

ConfigurationSpace interface_space(const PartOrders& orders) {
  std::vector<PosetDescriptor> dims;
  dims.reserve(6);
  for (std::size_t p = 0; p < 6; ++p) dims.push_back({std::string(kPartNames[p]), orders[p]});
  return ConfigurationSpace(std::move(dims));
}

PartOrders void_parts() {
  return {void_order(), void_order(), void_order(), void_order(), void_order(), void_order()};
}

namespace {

ConfigurationSet with_space(const ConfigurationSet& set, ConfigurationSpace space) {
  return ConfigurationSet(std::move(space), set.configs());
}

ConfigurationSet canonical_parts(const ConfigurationSet& set) {
  if (set.space().size() != 6)
    throw Error(ErrorKind::ShapeMismatch,
                "a QRM interface has six parts, got " + std::to_string(set.space().size()));
  std::vector<PosetDescriptor> dims;
  for (std::size_t p = 0; p < 6; ++p) dims.push_back({std::string(kPartNames[p]), set.space().order(p)});
  ConfigurationSpace space(std::move(dims));
  if (space == set.space()) return set;
  return with_space(set, std::move(space));
}

}  // namespace

QRMInterface::QRMInterface(const ConfigurationSet& set) : set_(canonical_parts(set)) {}

QRMInterface::QRMInterface(const PartOrders& orders, const std::vector<PartValues>& configs)
    : set_(interface_space(orders)) {
  for (const auto& c : configs) set_.insert(Configuration(std::vector<Value>(c.begin(), c.end())));
}

PartOrders QRMInterface::orders() const {
  PartOrders out = void_parts();
  for (std::size_t p = 0; p < 6; ++p) out[p] = set_.space().order(p);
  return out;
}

// ---------------------------------------------------------------------------
// DerivationSpec

DerivationSpec DerivationSpec::copy(DimRef i) { return DerivationSpec(Kind::Copy, {std::move(i)}); }
DerivationSpec DerivationSpec::group(DimRef i, DimRef j) {
  return DerivationSpec(Kind::Group, {std::move(i), std::move(j)});
}
DerivationSpec DerivationSpec::ungroup(DimRef i, std::size_t j) {
  DerivationSpec d(Kind::Ungroup, {std::move(i)});
  d.sub_index_ = j;
  return d;
}
DerivationSpec DerivationSpec::void_() { return DerivationSpec(Kind::Void, {}); }
DerivationSpec DerivationSpec::add(DimRef i, DimRef j) { return DerivationSpec(Kind::Add, {std::move(i), std::move(j)}); }
DerivationSpec DerivationSpec::mult(DimRef i, DimRef j) {
  return DerivationSpec(Kind::Mult, {std::move(i), std::move(j)});
}
DerivationSpec DerivationSpec::min(DimRef i, DimRef j) { return DerivationSpec(Kind::Min, {std::move(i), std::move(j)}); }
DerivationSpec DerivationSpec::max(DimRef i, DimRef j) { return DerivationSpec(Kind::Max, {std::move(i), std::move(j)}); }
DerivationSpec DerivationSpec::sub(DimRef p, DimRef c) { return DerivationSpec(Kind::Sub, {std::move(p), std::move(c)}); }
DerivationSpec DerivationSpec::div(DimRef p, DimRef c) { return DerivationSpec(Kind::Div, {std::move(p), std::move(c)}); }
DerivationSpec DerivationSpec::poset_add(DimRef i, DimRef j) {
  return DerivationSpec(Kind::PosetAdd, {std::move(i), std::move(j)});
}
DerivationSpec DerivationSpec::poset_sub(DimRef p, DimRef c) {
  return DerivationSpec(Kind::PosetSub, {std::move(p), std::move(c)});
}
DerivationSpec DerivationSpec::concat(DimRef i, DimRef j) {
  return DerivationSpec(Kind::Concat, {std::move(i), std::move(j)});
}
DerivationSpec DerivationSpec::drop(DimRef i) { return DerivationSpec(Kind::Drop, {std::move(i)}); }
DerivationSpec DerivationSpec::custom(CustomFn fn, OrderKind target, std::string label) {
  DerivationSpec d(Kind::Custom, {});
  d.fn_ = std::move(fn);
  d.target_ = std::move(target);
  d.label_ = std::move(label);
  return d;
}

DerivationSpec DerivationSpec::named(std::string name) const {
  DerivationSpec d = *this;
  d.name_ = std::move(name);
  return d;
}

namespace {

const char* kind_label(DerivationSpec::Kind k) {
  using K = DerivationSpec::Kind;
  switch (k) {
    case K::Copy: return "copy";
    case K::Group: return "group";
    case K::Ungroup: return "ungroup";
    case K::Void: return "void";
    case K::Add: return "add";
    case K::Mult: return "mult";
    case K::Min: return "min";
    case K::Max: return "max";
    case K::Sub: return "sub";
    case K::Div: return "div";
    case K::PosetAdd: return "padd";
    case K::PosetSub: return "psub";
    case K::Concat: return "concat";
    case K::Drop: return "drop";
    case K::Custom: return "custom";
  }
  return "derived";
}

bool subtractable(const OrderKind& o) {
  switch (o.kind()) {
    case OrderKind::Kind::NumLe:
    case OrderKind::Kind::NumGe: return true;
    case OrderKind::Kind::ElementWise:
      return std::all_of(o.parts().begin(), o.parts().end(), subtractable);
    default: return false;
  }
}

void flatten_order(const OrderKind& o, std::vector<OrderKind>& out) {
  if (is_void_order(o)) return;
  if (o.kind() == OrderKind::Kind::ElementWise) {
    for (const auto& p : o.parts()) flatten_order(p, out);
    return;
  }
  out.push_back(o);
}

void flatten_value(const OrderKind& o, const Value& v, std::vector<Value>& out) {
  if (is_void_order(o)) return;
  if (o.kind() == OrderKind::Kind::ElementWise) {
    for (std::size_t k = 0; k < o.parts().size(); ++k)
      flatten_value(o.parts()[k], v.is_tuple() ? v.items()[k] : v, out);
    return;
  }
  out.push_back(v);
}

OrderKind pack_order(std::vector<OrderKind> leaves) {
  if (leaves.empty()) return void_order();
  if (leaves.size() == 1) return leaves.front();
  return OrderKind::elementwise(std::move(leaves));
}

Value pack_value(std::vector<Value> leaves) {
  if (leaves.empty()) return Value::void_value();
  if (leaves.size() == 1) return leaves.front();
  return Value::tuple(std::move(leaves));
}

void require_le_pair(const OrderKind& a, const OrderKind& b, const char* what) {
  if (a.kind() != OrderKind::Kind::NumLe || b.kind() != OrderKind::Kind::NumLe)
    throw Error(ErrorKind::OrderMismatch, std::string(what) + " needs two <=-ordered integer dimensions, got " +
                                              a.to_string() + " and " + b.to_string());
}

void require_producer_consumer(const OrderKind& p, const OrderKind& c, const char* what) {
  if (p.kind() != OrderKind::Kind::NumLe || !(c == dual(p)))
    throw Error(ErrorKind::OrderMismatch, std::string(what) + " needs a <= producer and its dual consumer, got " +
                                              p.to_string() + " and " + c.to_string());
}

Value numeric_min(const Value& a, const Value& b) { return numeric_order(a, b) <= 0 ? a : b; }
Value numeric_max(const Value& a, const Value& b) { return numeric_order(a, b) >= 0 ? a : b; }

Value numeric_div(const Value& p, const Value& c) {
  auto negative = [](const Value& v) { return v.is_bot() || (v.is_int() && v.as_int() < 0); };
  if (negative(p) || negative(c))
    throw Error(ErrorKind::DomainError, "division needs non-negative operands, got " + p.to_string() + " / " +
                                            c.to_string());
  if (p.is_top()) return Value::top();
  if (c.is_top()) return Value::integer(0);
  if (c.as_int() == 0) throw Error(ErrorKind::ArithmeticError, "division by zero");
  return Value::integer(p.as_int() / c.as_int());
}

}  // namespace

ConfigurationSet DerivationSpec::apply(const ConfigurationSet& set) const {
  const auto& space = set.space();
  std::vector<std::size_t> idx;
  for (const auto& r : refs_) idx.push_back(space.index_of(r));

  if (kind_ == Kind::Drop) return abstract(set, idx[0]);

  OrderKind target = void_order();
  DerivationFn f;
  switch (kind_) {
    case Kind::Copy:
      target = space.order(idx[0]);
      f = [i = idx[0]](const Configuration& c) { return c[i]; };
      break;
    case Kind::Group: {
      if (idx[0] > idx[1]) throw Error(ErrorKind::IndexError, "group range is reversed");
      if (idx[0] == idx[1]) {
        target = space.order(idx[0]);
        f = [i = idx[0]](const Configuration& c) { return c[i]; };
        break;
      }
      std::vector<OrderKind> parts;
      for (auto k = idx[0]; k <= idx[1]; ++k) parts.push_back(space.order(k));
      target = OrderKind::elementwise(std::move(parts));
      f = [lo = idx[0], hi = idx[1]](const Configuration& c) {
        return Value::tuple(Value::Tuple(c.begin() + static_cast<std::ptrdiff_t>(lo),
                                         c.begin() + static_cast<std::ptrdiff_t>(hi) + 1));
      };
      break;
    }
    case Kind::Ungroup: {
      const auto& o = space.order(idx[0]);
      if (o.kind() != OrderKind::Kind::ElementWise || sub_index_ >= o.parts().size())
        throw Error(ErrorKind::ShapeMismatch, "cannot ungroup part " + std::to_string(sub_index_) + " of " +
                                                  o.to_string());
      target = o.parts()[sub_index_];
      f = [i = idx[0], j = sub_index_](const Configuration& c) {
        const auto& v = c[i];
        return v.is_tuple() ? v.items()[j] : v;
      };
      break;
    }
    case Kind::Void:
      f = [](const Configuration&) { return Value::void_value(); };
      break;
    case Kind::Add:
    case Kind::Mult:
    case Kind::Min:
    case Kind::Max: {
      const auto& oi = space.order(idx[0]);
      const auto& oj = space.order(idx[1]);
      require_le_pair(oi, oj, kind_label(kind_));
      target = OrderKind::le(oi.domain() == oj.domain() ? oi.domain() : std::string());
      Value (*op)(const Value&, const Value&) = kind_ == Kind::Add    ? numeric_add
                                                : kind_ == Kind::Mult ? numeric_mul
                                                : kind_ == Kind::Min  ? numeric_min
                                                                      : numeric_max;
      f = [i = idx[0], j = idx[1], op](const Configuration& c) { return op(c[i], c[j]); };
      break;
    }
    case Kind::Sub:
    case Kind::Div: {
      const auto& op = space.order(idx[0]);
      require_producer_consumer(op, space.order(idx[1]), kind_label(kind_));
      target = op;
      Value (*fn)(const Value&, const Value&) = kind_ == Kind::Sub ? numeric_sub : numeric_div;
      f = [p = idx[0], c = idx[1], fn](const Configuration& cfg) { return fn(cfg[p], cfg[c]); };
      break;
    }
    case Kind::PosetAdd: {
      const auto& oi = space.order(idx[0]);
      const auto& oj = space.order(idx[1]);
      if (oi == oj || is_void_order(oj)) target = oi;
      else if (is_void_order(oi)) target = oj;
      else target = OrderKind::elementwise({oi, oj});
      f = [i = idx[0], j = idx[1], oi, oj](const Configuration& c) { return value_add(oi, c[i], oj, c[j]).first; };
      break;
    }
    case Kind::PosetSub: {
      const auto& op = space.order(idx[0]);
      const auto& oc = space.order(idx[1]);
      if (!(oc == dual(op)))
        throw Error(ErrorKind::OrderMismatch,
                    "poset subtraction needs dual orders, got " + op.to_string() + " and " + oc.to_string());
      target = op;
      f = [p = idx[0], c = idx[1], op, oc](const Configuration& cfg) {
        return value_sub(op, cfg[p], oc, cfg[c]).first;
      };
      break;
    }
    case Kind::Concat: {
      const auto oi = space.order(idx[0]);
      const auto oj = space.order(idx[1]);
      std::vector<OrderKind> leaves;
      flatten_order(oi, leaves);
      flatten_order(oj, leaves);
      target = pack_order(std::move(leaves));
      f = [i = idx[0], j = idx[1], oi, oj](const Configuration& c) {
        std::vector<Value> vs;
        flatten_value(oi, c[i], vs);
        flatten_value(oj, c[j], vs);
        return pack_value(std::move(vs));
      };
      break;
    }
    case Kind::Custom:
      target = *target_;
      f = [fn = fn_, &space](const Configuration& c) { return fn(c, space); };
      break;
    case Kind::Drop: break;
  }
  std::string name = name_.empty() ? std::string(kind_ == Kind::Custom ? label_ : kind_label(kind_)) : name_;
  return derive(set, f, PosetDescriptor{std::move(name), std::move(target)});
}

ConfigurationSet apply_pipeline(const ConfigurationSet& set, const Pipeline& steps) {
  ConfigurationSet out = set;
  for (const auto& s : steps) out = s.apply(out);
  return out;
}

// ---------------------------------------------------------------------------
// ConstraintSpec

ConstraintSpec ConstraintSpec::producer_consumer(DimRef p, DimRef c, ValueFn f) {
  ConstraintSpec s(Kind::ProducerConsumer);
  s.refs_ = {std::move(p), std::move(c)};
  s.f_ = std::move(f);
  return s;
}

ConstraintSpec ConstraintSpec::subset(DimRef i, std::vector<Value> allowed) {
  ConstraintSpec s(Kind::Subset);
  s.refs_ = {std::move(i)};
  s.allowed_ = std::move(allowed);
  return s;
}

ConstraintSpec ConstraintSpec::custom(CustomPred pred, std::string label) {
  ConstraintSpec s(Kind::Custom);
  s.pred_ = std::move(pred);
  s.label_ = std::move(label);
  return s;
}

Predicate ConstraintSpec::bind(const ConfigurationSpace& space) const {
  switch (kind_) {
    case Kind::ProducerConsumer: {
      const auto p = space.index_of(refs_[0]);
      const auto c = space.index_of(refs_[1]);
      if (p == c) throw Error(ErrorKind::ConstraintTypeError, "producer and consumer are the same dimension");
      return [p, c, op = space.order(p), f = f_](const Configuration& cfg) {
        return leq(op, f ? f(cfg[c]) : cfg[c], cfg[p]);
      };
    }
    case Kind::Subset: {
      const auto i = space.index_of(refs_[0]);
      if (space.order(i).kind() != OrderKind::Kind::EqOnly)
        throw Error(ErrorKind::OrderError, "subset constraint on dimension " + space[i].name + " ordered by " +
                                               space.order(i).to_string());
      return [i, allowed = allowed_](const Configuration& cfg) {
        return std::find(allowed.begin(), allowed.end(), cfg[i]) != allowed.end();
      };
    }
    case Kind::Custom:
      return [pred = pred_, space](const Configuration& cfg) { return pred(cfg, space); };
  }
  return [](const Configuration&) { return true; };
}

// ---------------------------------------------------------------------------
// Patterns

std::string part_ref(std::size_t constituent, Part p) {
  return "c" + std::to_string(constituent) + "." + std::string(kPartNames[static_cast<std::size_t>(p)]);
}

std::array<Pipeline, 6> copy_parts() {
  std::array<Pipeline, 6> out;
  for (std::size_t p = 0; p < 6; ++p) out[p] = {DerivationSpec::copy(p)};
  return out;
}

namespace {

ConfigurationSet labelled(const QRMInterface& iface, std::size_t k) {
  std::vector<PosetDescriptor> dims;
  for (std::size_t p = 0; p < 6; ++p) dims.push_back({part_ref(k, static_cast<Part>(p)), iface.space().order(p)});
  return with_space(iface.set(), ConfigurationSpace(std::move(dims)));
}

// Appends the six target parts to every source configuration.
ConfigurationSet normalize(const ConfigurationSet& source, const Normalization& how) {
  if (const auto* pipelines = std::get_if<std::array<Pipeline, 6>>(&how)) {
    ConfigurationSet out = source;
    for (std::size_t p = 0; p < 6; ++p) {
      const auto before = out.space().size();
      out = apply_pipeline(out, (*pipelines)[p]);
      if (out.space().size() != before + 1)
        throw Error(ErrorKind::NormalizationShapeError,
                    "the " + std::string(kPartNames[p]) + " derivation must append exactly one dimension");
      out = with_space(out, out.space().renamed(before, std::string(kPartNames[p])));
    }
    return out;
  }
  const auto& cn = std::get<ConstraintNormalization>(how);
  const auto space = source.space().concatenated(interface_space(cn.target));
  ConfigurationSet out(space);
  for (const auto& c : source) {
    for (const auto& tv : cn.candidates(c, source.space())) {
      auto values = c.values();
      values.insert(values.end(), tv.begin(), tv.end());
      Configuration joined(std::move(values));
      if (!cn.admit || cn.admit(joined, space)) out.insert(std::move(joined));
    }
  }
  return out;
}

}  // namespace

QRMInterface apply_alternatives(const AlternativesSpec& spec) {
  if (spec.branches.empty()) throw Error(ErrorKind::InvalidArgument, "alternatives need at least one branch");
  const auto target_space = interface_space(spec.target);
  ConfigurationSet acc(target_space);
  for (std::size_t b = 0; b < spec.branches.size(); ++b) {
    const auto& branch = spec.branches[b];
    auto normalized = minimize(abstract_prefix(normalize(labelled(branch.iface, 1), branch.normalization), 6));
    if (!normalized.space().same_orders(target_space))
      throw Error(ErrorKind::NormalizationShapeError, "branch " + std::to_string(b + 1) + " normalizes to " +
                                                          normalized.space().to_string() + " instead of " +
                                                          target_space.to_string());
    for (const auto& c : normalized) acc.insert(c);
  }
  return QRMInterface(minimize(acc));
}

QRMInterface apply_aggregation(const AggregationSpec& spec) {
  if (spec.constituents.empty()) throw Error(ErrorKind::InvalidArgument, "aggregation of no constituents");
  std::vector<ConfigurationSet> parts;
  for (std::size_t k = 0; k < spec.constituents.size(); ++k) parts.push_back(labelled(spec.constituents[k], k + 1));
  ConfigurationSet product = free_product(parts);
  for (const auto& d : spec.pre_constraints) product = d.apply(product);
  ConfigurationSet derived = normalize(product, spec.parts);
  for (const auto& d : spec.post_constraints) derived = d.apply(derived);
  return QRMInterface(minimize(abstract_prefix(derived, 6 * spec.constituents.size())));
}

namespace {

const std::string c1(Part p) { return part_ref(1, p); }
const std::string c2(Part p) { return part_ref(2, p); }

Pipeline add_part(Part p) { return {DerivationSpec::poset_add(c1(p), c2(p))}; }

// Leftover producer budget (or output) added to the second constituent's
// part. Without a meaningful subtraction the producer side is consumed
// completely and only the second part survives.
Pipeline consume(Part producer, Part consumer, Part keep, const OrderKind& producer_order) {
  if (!subtractable(producer_order)) return {DerivationSpec::copy(c2(keep))};
  return {DerivationSpec::poset_sub(c1(producer), c2(consumer)).named("leftover"),
          DerivationSpec::poset_add(c2(keep), std::string("leftover")),
          DerivationSpec::drop(std::string("leftover"))};
}

Pipeline parameters(const TemplateOptions& opts) {
  if (opts.parameters == ParameterMode::Void) return {DerivationSpec::void_()};
  return add_part(Part::Parameters);
}

std::vector<ConstraintSpec> with_matching(ConstraintSpec match, const std::vector<ConstraintSpec>& extra) {
  std::vector<ConstraintSpec> out{std::move(match)};
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

}  // namespace

QRMInterface free_aggregate(const QRMInterface& a, const QRMInterface& b, const TemplateOptions& opts) {
  std::array<Pipeline, 6> parts;
  for (std::size_t p = 0; p < 5; ++p) parts[p] = add_part(static_cast<Part>(p));
  parts[5] = parameters(opts);
  return apply_aggregation({{a, b}, opts.pre, parts, opts.post});
}

QRMInterface horizontal_aggregate(const QRMInterface& a, const QRMInterface& b, const TemplateOptions& opts) {
  const auto& out_order = a.order(Part::Output);
  if (!(out_order == dual(b.order(Part::Input))))
    throw Error(ErrorKind::OrderMismatch, "output " + out_order.to_string() + " does not match input " +
                                              b.order(Part::Input).to_string());
  std::array<Pipeline, 6> parts;
  parts[0] = {DerivationSpec::copy(c1(Part::Input))};
  parts[1] = consume(Part::Output, Part::Input, Part::Output, out_order);
  parts[2] = add_part(Part::Required);
  parts[3] = add_part(Part::Provided);
  parts[4] = add_part(Part::Quality);
  parts[5] = parameters(opts);
  auto pre = with_matching(ConstraintSpec::producer_consumer(c1(Part::Output), c2(Part::Input)), opts.pre);
  return apply_aggregation({{a, b}, std::move(pre), parts, opts.post});
}

QRMInterface vertical_aggregate(const QRMInterface& a, const QRMInterface& b, const TemplateOptions& opts) {
  const auto& prov_order = a.order(Part::Provided);
  if (!(prov_order == dual(b.order(Part::Required))))
    throw Error(ErrorKind::OrderMismatch, "provided " + prov_order.to_string() + " does not match required " +
                                              b.order(Part::Required).to_string());
  std::array<Pipeline, 6> parts;
  parts[0] = add_part(Part::Input);
  parts[1] = add_part(Part::Output);
  parts[2] = {DerivationSpec::copy(c1(Part::Required))};
  parts[3] = consume(Part::Provided, Part::Required, Part::Provided, prov_order);
  parts[4] = add_part(Part::Quality);
  parts[5] = parameters(opts);
  auto pre = with_matching(ConstraintSpec::producer_consumer(c1(Part::Provided), c2(Part::Required)), opts.pre);
  return apply_aggregation({{a, b}, std::move(pre), parts, opts.post});
}

}  // namespace qrm
