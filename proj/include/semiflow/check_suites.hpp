#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace semiflow {

/// One property-suite verdict: the worst relative error observed over all
/// trials against the suite's tolerance.
struct SuiteOutcome {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  int trials = 0;
  bool pass = false;
};

/// Associativity defect F(F(X,Y),Z) vs F(X,F(Y,Z)) for the four bundled
/// operators on seeded random well-conditioned triples.
std::vector<SuiteOutcome> associativity_suite(std::uint64_t seed, int trials,
                                              int n = 8);

/// Discrete flow property X_{i+j} = F(X_i, X_j) for i + j <= max_index on
/// random Stein and Riccati instances, plus argument-order symmetry.
std::vector<SuiteOutcome> flow_suite(std::uint64_t seed, int max_index = 16);

/// The four pivot-block identities behind the composite-map and Riccati
/// operators, on seeded random triples.
std::vector<SuiteOutcome> lemma_suite(std::uint64_t seed, int trials,
                                      int n = 6);

/// Scalar closed forms against manual map compositions, accelerated-sequence
/// agreement with the plain sequence, and the two-sided limit classification.
std::vector<SuiteOutcome> scalar_oracle_suite(std::uint64_t seed, int trials);

/// Everything above with default sizes.
std::vector<SuiteOutcome> all_suites(std::uint64_t seed, int trials);

}  // namespace semiflow
