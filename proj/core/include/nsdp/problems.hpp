#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsdp/model.hpp"
#include "nsdp/optimality.hpp"

namespace nsdp {

struct CorpusEntry {
  NsdpProblem problem;
  std::optional<Vec> known_solution;
  std::optional<MultiplierPair> known_multipliers;
  std::string degeneracy_notes;
  Index b_count_at_solution = 0;
};

/// Registered corpus entry by name. Throws Error{NotFound} for unknown names.
const CorpusEntry& get_problem(const std::string& name);

/// Registered names in a fixed order.
std::vector<std::string> list_problems();

}  // namespace nsdp
