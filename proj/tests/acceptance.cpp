// Acceptance runner: one PASS/FAIL line per criterion.
//
//   noether_acceptance            run every criterion
//   noether_acceptance ward n1    run the named (or numbered) criteria

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "noether/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace noether::acceptance;
  std::vector<int> ids;
  for (int k = 1; k < argc; ++k) {
    int id = suite_id(argv[k]);
    if (id == 0) {
      std::cerr << "unknown criterion '" << argv[k] << "'; known:";
      for (const auto& n : suite_names()) std::cerr << " " << n;
      std::cerr << "\n";
      return 2;
    }
    ids.push_back(id);
  }
  if (ids.empty()) {
    for (std::size_t k = 1; k <= suite_names().size(); ++k) ids.push_back(static_cast<int>(k));
  }
  int failed = 0;
  for (int id : ids) {
    Result r = run(id);
    std::cout << format(r) << std::endl;
    failed += r.passed ? 0 : 1;
  }
  std::printf("%zu/%zu criteria passed\n", ids.size() - failed, ids.size());
  return failed == 0 ? 0 : 1;
}
