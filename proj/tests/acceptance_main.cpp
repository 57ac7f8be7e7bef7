#include <iostream>

#include "multixfer/acceptance.hpp"

int main() {
  const auto results = multixfer::run_acceptance(multixfer::default_jobs(), std::cout);
  bool all = true;
  for (const auto& r : results) all = all && r.pass;
  std::cout << (all ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: failures present") << "\n";
  return all ? 0 : 1;
}
