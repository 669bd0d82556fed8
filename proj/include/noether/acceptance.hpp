#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace noether::acceptance {

struct Options {
  double tol_scale = 1.0;     // multiplies every floating-point tolerance
  std::uint64_t seed = 20241018;
};

struct Result {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string detail;
};

/// Suite names in criterion order (index 0 is criterion 1).
const std::vector<std::string>& suite_names();

/// Accepts a suite name or its 1-based number; returns 0 if unknown.
int suite_id(const std::string& name_or_number);

Result run(int id, const Options& opts = {});

/// One line per criterion: "PASS 01 coefficients (0.002 s / limit 1 s): detail".
std::string format(const Result& r);

/// Invariant test Lagrangians in the DSL, keyed by name.
const std::map<std::string, std::string>& shipped_lagrangians();

}  // namespace noether::acceptance
