#include "ots/connectivity.hpp"

#include <algorithm>
#include <numeric>

#include "ots/errors.hpp"

namespace ots {

int EnergizedSet::count() const {
  return static_cast<int>(std::count(energized.begin(), energized.end(), std::uint8_t{1}));
}

bool EnergizedSet::all() const {
  return std::all_of(energized.begin(), energized.end(), [](std::uint8_t b) { return b != 0; });
}

int resolve_source(const GridCase& grid) {
  const SourcePolicy& policy = grid.source_policy();
  if (policy.kind == SourcePolicy::Kind::ExplicitBus) return policy.bus;
  int best = 0;
  for (const Bus& bus : grid.buses())
    if (bus.gen_mw > grid.buses()[static_cast<std::size_t>(best)].gen_mw) best = bus.id;
  return best;
}

EnergizedSet energized_set(const GridCase& grid, std::span<const std::uint8_t> open_mask,
                           int source) {
  if (source < 0 || source >= grid.num_buses())
    throw ValidationError("source bus " + std::to_string(source) + " does not exist");
  if (open_mask.size() != static_cast<std::size_t>(grid.num_branches()))
    throw ValidationError("open mask size does not match the branch count");

  EnergizedSet result;
  result.source = source;
  result.energized.assign(static_cast<std::size_t>(grid.num_buses()), 0);
  std::vector<int> stack{source};
  result.energized[static_cast<std::size_t>(source)] = 1;
  while (!stack.empty()) {
    const int bus = stack.back();
    stack.pop_back();
    for (int e : grid.incident(bus)) {
      if (open_mask[static_cast<std::size_t>(e)]) continue;
      const int other = grid.opposite(e, bus);
      if (!result.energized[static_cast<std::size_t>(other)]) {
        result.energized[static_cast<std::size_t>(other)] = 1;
        stack.push_back(other);
      }
    }
  }
  return result;
}

EnergizedSet energized_set(const GridCase& grid, const SwitchingState& state, int source) {
  return energized_set(grid, std::span<const std::uint8_t>(state.open), source);
}

bool is_connected(const GridCase& grid, std::span<const std::uint8_t> open_mask) {
  return energized_set(grid, open_mask, 0).all();
}

bool is_connected(const GridCase& grid, const SwitchingState& state) {
  return is_connected(grid, std::span<const std::uint8_t>(state.open));
}

namespace {

// Iterative Tarjan lowpoint search. Parallel branches are handled by
// excluding only the tree branch itself on the way back up, so a doubled
// connection never counts as a bridge.
struct BridgeSearch {
  const GridCase& grid;
  std::span<const std::uint8_t> open;
  std::vector<int> order, low;
  int counter = 0;
  std::vector<int> out;

  explicit BridgeSearch(const GridCase& g, std::span<const std::uint8_t> mask)
      : grid(g), open(mask), order(g.num_buses(), -1), low(g.num_buses(), 0) {}

  void run(int root) {
    struct Frame {
      int bus;
      int via_branch;  // tree branch used to enter, -1 at the root
      std::size_t next = 0;
    };
    std::vector<Frame> stack;
    stack.push_back({root, -1});
    order[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    while (!stack.empty()) {
      Frame& frame = stack.back();
      const auto& inc = grid.incident(frame.bus);
      if (frame.next < inc.size()) {
        const int e = inc[frame.next++];
        if (open[static_cast<std::size_t>(e)] || e == frame.via_branch) continue;
        const int other = grid.opposite(e, frame.bus);
        if (order[static_cast<std::size_t>(other)] < 0) {
          order[static_cast<std::size_t>(other)] = low[static_cast<std::size_t>(other)] =
              counter++;
          stack.push_back({other, e});
        } else {
          low[static_cast<std::size_t>(frame.bus)] = std::min(
              low[static_cast<std::size_t>(frame.bus)], order[static_cast<std::size_t>(other)]);
        }
      } else {
        const Frame done = frame;
        stack.pop_back();
        if (done.via_branch >= 0) {
          const int parent = grid.opposite(done.via_branch, done.bus);
          low[static_cast<std::size_t>(parent)] = std::min(
              low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(done.bus)]);
          if (low[static_cast<std::size_t>(done.bus)] > order[static_cast<std::size_t>(parent)])
            out.push_back(done.via_branch);
        }
      }
    }
  }
};

}  // namespace

std::vector<int> bridges(const GridCase& grid, std::span<const std::uint8_t> open_mask) {
  BridgeSearch search(grid, open_mask);
  search.run(0);
  std::sort(search.out.begin(), search.out.end());
  return search.out;
}

std::vector<int> bridges(const GridCase& grid, const SwitchingState& state) {
  return bridges(grid, std::span<const std::uint8_t>(state.open));
}

}  // namespace ots
