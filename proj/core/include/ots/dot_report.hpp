#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ots/dc_analysis.hpp"
#include "ots/grid.hpp"

namespace ots {

// Graphviz rendering of one outcome. Preventively opened branches are
// omitted; the contingency branch is dashed; branches in de-energized areas
// are black; overloaded branches red; everything else green with the flow
// magnitude (1 decimal, MW) as edge label and the edge drawn in the physical
// flow direction. Generating buses are circles, others squares, scaled by
// net injection; de-energized buses carry their lost load in brackets.
std::string render_dot(const GridCase& grid, const SwitchingState& state,
                       const ContingencyOutcome& outcome);

// Writes base.dot plus contingency_<id>.dot per contingency (ids zero-padded
// to two digits) into `dir`, creating it if needed. Returns the file names
// written, in emission order.
std::vector<std::string> emit_dot(const GridCase& grid, const SecurityReport& report,
                                  const std::filesystem::path& dir);

}  // namespace ots
