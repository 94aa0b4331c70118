#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "pvlab/rules.hpp"

namespace pvlab {

/// Exhaustive-subset Phragmen score, independent of the sorted-prefix
/// implementation; reference oracle for equivalence checks.
std::optional<PhragmenScore> phragmen_score_brute_force(const std::vector<double>& loads,
                                                        const std::vector<int>& approvers);

/// Runs the brute-force and identity suites, one pass/fail line each.
/// Returns true when everything passed.
bool run_oracle_suite(std::ostream& out);

}  // namespace pvlab
