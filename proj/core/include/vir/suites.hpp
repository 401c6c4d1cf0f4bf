#ifndef VIR_SUITES_HPP
#define VIR_SUITES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace vir {

/// Named randomized verification sweeps with mandatory seeds; shared between
/// the CLI `check` subcommand and the acceptance suite. Deterministic for a
/// given (seed, samples) pair.
struct SuiteResult {
  std::string name;
  int total = 0;
  int failures = 0;
  std::vector<std::string> notes; // first few failure details

  bool ok() const { return failures == 0; }
  std::string summary(std::uint64_t seed) const;
};

SuiteResult suite_lie(std::uint64_t seed, int samples);
SuiteResult suite_automorphism(std::uint64_t seed, int samples);
SuiteResult suite_modules(std::uint64_t seed, int samples);
SuiteResult suite_super(std::uint64_t seed, int samples);
SuiteResult suite_classifier(std::uint64_t seed, int cases);

/// name is one of the suite names or "all".
std::vector<SuiteResult> run_suites(const std::string& name, std::uint64_t seed, int samples);

} // namespace vir

#endif
