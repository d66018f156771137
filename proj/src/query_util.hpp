#pragma once

#include <utility>
#include <vector>

#include "cqa/relational.hpp"

namespace cqa::detail {

// Extracts (negated, tuple) pairs from a ground literal conjunction;
// rejects open queries, comparisons, and (when atoms_only) anything but a
// single positive atom.
std::vector<std::pair<bool, DbTuple>> ground_literals(const Query& q,
                                                      const Schema& schema,
                                                      bool atoms_only);

}  // namespace cqa::detail
