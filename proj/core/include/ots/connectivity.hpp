#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ots/grid.hpp"

namespace ots {

struct EnergizedSet {
  std::vector<std::uint8_t> energized;  // per bus, 1 = reachable from source
  int source = -1;

  bool is_energized(int bus) const { return energized[static_cast<std::size_t>(bus)] != 0; }
  int count() const;
  bool all() const;
  bool operator==(const EnergizedSet&) const = default;
};

// The bus asserted to remain energized. LargestGenerator resolves to the
// bus with maximal gen_mw, lowest id winning ties.
int resolve_source(const GridCase& grid);

// Buses reachable from `source` over branches not flagged in `open_mask`.
EnergizedSet energized_set(const GridCase& grid, std::span<const std::uint8_t> open_mask,
                           int source);
EnergizedSet energized_set(const GridCase& grid, const SwitchingState& state, int source);

// True when every bus is reachable from every other over closed branches.
bool is_connected(const GridCase& grid, std::span<const std::uint8_t> open_mask);
bool is_connected(const GridCase& grid, const SwitchingState& state);

// Closed branches whose removal would disconnect the closed subgraph,
// ascending by id. Precondition: the closed subgraph is connected.
std::vector<int> bridges(const GridCase& grid, std::span<const std::uint8_t> open_mask);
std::vector<int> bridges(const GridCase& grid, const SwitchingState& state);

}  // namespace ots
