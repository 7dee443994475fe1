#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ots/grid.hpp"

namespace ots {

struct MatpowerOptions {
  // CSV file "branch_id,limit_mw" supplying limits for branches whose rateA
  // is zero or missing. Required when the case has any such branch.
  std::filesystem::path limits_override;
  // Merge branches that share both endpoints into one equivalent branch
  // (susceptances added, limits added). Default keeps them distinct.
  bool collapse_parallel = false;
  // When non-null, receives human-readable notes about adjustments made
  // during import (slack rebalancing, collapsed branches, ...).
  std::vector<std::string>* warnings = nullptr;
};

// Reads a MATPOWER case file (function mpc = ...; mpc.bus = [...]; ...).
// Buses are renumbered to contiguous 0-based ids in file order and labeled
// with their original numbers. Out-of-service branches and generators are
// dropped. If total generation does not match total load, the largest
// generator is adjusted to restore balance. All branches become the
// contingency list with uniform probabilities 1/|E|.
GridCase import_matpower(const std::filesystem::path& path, const MatpowerOptions& options = {});

}  // namespace ots
