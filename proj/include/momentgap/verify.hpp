#ifndef MOMENTGAP_VERIFY_HPP
#define MOMENTGAP_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace momentgap::verify {

struct VerifyConfig {
  std::uint64_t seed = 42;
  std::int64_t samples = 10000;
  // Constant used in the (p,q) = (4,6) inequality sweep. The sharp value is
  // 1/3; overriding it (say to 0.4) injects a fault that the two-point
  // probes near (a -> 1, c = 1/2) are guaranteed to witness.
  double c46 = 1.0 / 3.0;
};

struct SuiteResult {
  std::string name;
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  double max_excess = 0.0;  // worst overshoot beyond the allowed tolerance
  std::string witness;      // serialized first failing input, if any
};

struct VerifyReport {
  VerifyConfig config;
  std::vector<SuiteResult> suites;
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  double max_excess = 0.0;

  bool ok() const { return violations == 0; }
  // Renderings are built from deterministic formatting only: identical
  // configs yield byte-identical strings.
  std::string text() const;
  std::string json() const;
};

VerifyReport run_verify(const VerifyConfig& cfg);

}  // namespace momentgap::verify

#endif  // MOMENTGAP_VERIFY_HPP
