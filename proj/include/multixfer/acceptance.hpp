#pragma once

#include <iosfwd>

#include "multixfer/estimation.hpp"

namespace multixfer {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  Real elapsed_s = 0.0;
  std::string detail;
};

/// Runs the full acceptance suite (one entry per criterion, in order) and logs
/// one pass/fail line per criterion to `log`.
std::vector<CriterionResult> run_acceptance(int jobs, std::ostream& log);

}  // namespace multixfer
