#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcg/curvature_family.hpp"

// Randomized property suite over the curvature functions and their
// linearization.  Every check draws its own deterministic SplitMix64
// stream from the base seed, so a fixed seed reproduces the report
// byte for byte.

namespace hcg {

struct PropertyResult {
  std::string name;
  std::string family;  // empty for family-independent checks
  int n = 0;
  int samples = 0;   // qualifying draws actually tested
  int failures = 0;
  double worst_slack = 0;  // most adverse margin seen (>= -tolerance passes)
  double tolerance = 0;
  bool pass() const { return failures == 0; }
};

struct VerifyReport {
  std::uint64_t seed = 0;
  int samples_per_check = 0;
  std::vector<PropertyResult> checks;
  bool all_pass() const;
};

// Families exercised by the suite: n = 2 mean, H2, H2/H1 and n = 3 mean,
// H2, H3, H2/H1, H3/H1, avg(H1, H2/H1).
std::vector<CurvatureFamily> verification_families();

VerifyReport run_property_suite(std::uint64_t seed, int samples = 10000);

}  // namespace hcg
