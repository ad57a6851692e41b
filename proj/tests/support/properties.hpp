#pragma once

// Randomized algebraic property suites shared by the property tests and the
// acceptance runner. Each suite runs a fixed number of seeded cases and
// reports how many failed.

#include <cstddef>
#include <string>

namespace qrm::testing {

struct SuiteResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && cases > 0; }
  void fail(std::string what) {
    if (failures++ == 0) first_failure = std::move(what);
  }
};

inline constexpr std::size_t kPropertyCases = 1000;

/// Minimization equals the brute-force filter on sets of up to 200 members.
SuiteResult minimize_matches_oracle(std::size_t cases = kPropertyCases);
/// Product, safe constraint, derivation, abstraction, permutation and
/// alternatives preserve set dominance.
SuiteResult dominance_preservation(std::size_t cases = kPropertyCases);
/// Product, safe constraint, derivation and permutation commute with
/// minimization; abstraction and alternatives have counterexamples.
SuiteResult minimality_preservation(std::size_t cases = kPropertyCases);
/// Random 2-3 stage pipelines are monotone in their inputs.
SuiteResult refinement(std::size_t cases = kPropertyCases);
/// Free, horizontal and vertical aggregation are monotone in their operands.
SuiteResult template_refinement(std::size_t cases = kPropertyCases);
/// A derivation equals a product with its range filtered by its graph.
SuiteResult derivation_as_constraint(std::size_t cases = kPropertyCases);

}  // namespace qrm::testing
