#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ots {

struct Bus {
  int id = -1;
  std::string label;
  double gen_mw = 0.0;
  double load_mw = 0.0;
};

struct Branch {
  int id = -1;
  int from = -1;  // origin bus
  int to = -1;    // destination bus
  double susceptance_pu = 0.0;
  double limit_mw = 0.0;
};

struct SourcePolicy {
  enum class Kind { LargestGenerator, ExplicitBus };
  Kind kind = Kind::LargestGenerator;
  int bus = -1;  // only meaningful for ExplicitBus

  static SourcePolicy largest_generator() { return {Kind::LargestGenerator, -1}; }
  static SourcePolicy explicit_bus(int bus) { return {Kind::ExplicitBus, bus}; }
  bool operator==(const SourcePolicy&) const = default;
};

// A set of preventively opened branches, as a mask over branch ids.
struct SwitchingState {
  std::vector<std::uint8_t> open;

  static SwitchingState all_closed(std::size_t num_branches) {
    return {std::vector<std::uint8_t>(num_branches, 0)};
  }
  static SwitchingState from_ids(std::size_t num_branches, std::span<const int> ids);

  bool is_open(int branch) const { return open[static_cast<std::size_t>(branch)] != 0; }
  int open_count() const;
  std::vector<int> open_ids() const;  // ascending
  bool operator==(const SwitchingState&) const = default;
};

// Immutable, validated description of a grid and its contingency set.
class GridCase {
 public:
  GridCase(double base_mva, std::vector<Bus> buses, std::vector<Branch> branches,
           std::vector<int> contingencies, std::map<int, double> probabilities,
           SourcePolicy source_policy);

  double base_mva() const { return base_mva_; }
  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Branch>& branches() const { return branches_; }
  const std::vector<int>& contingencies() const { return contingencies_; }
  const std::map<int, double>& probabilities() const { return probabilities_; }
  const SourcePolicy& source_policy() const { return source_policy_; }

  int num_buses() const { return static_cast<int>(buses_.size()); }
  int num_branches() const { return static_cast<int>(branches_.size()); }
  double probability(int contingency) const { return probabilities_.at(contingency); }

  double total_load_mw() const { return total_load_; }
  double total_gen_mw() const { return total_gen_; }

  // Branch ids incident to a bus, ascending.
  const std::vector<int>& incident(int bus) const {
    return incident_[static_cast<std::size_t>(bus)];
  }
  // The endpoint of `branch` that is not `bus`.
  int opposite(int branch, int bus) const;

  // Susceptance in MW per radian (base_mva * susceptance_pu).
  double susceptance_mw(int branch) const {
    return base_mva_ * branches_[static_cast<std::size_t>(branch)].susceptance_pu;
  }

  bool operator==(const GridCase&) const;

 private:
  double base_mva_;
  std::vector<Bus> buses_;
  std::vector<Branch> branches_;
  std::vector<int> contingencies_;
  std::map<int, double> probabilities_;
  SourcePolicy source_policy_;
  std::vector<std::vector<int>> incident_;
  double total_load_ = 0.0;
  double total_gen_ = 0.0;
};

GridCase load_case(const std::filesystem::path& path);
void save_case(const GridCase& grid, const std::filesystem::path& path);
std::string case_to_json_string(const GridCase& grid);
GridCase case_from_json_string(const std::string& text);

// Oriented incidence matrix, row-major |V| x |E|: column e holds +1 at the
// destination bus of e and -1 at its origin.
std::vector<std::vector<double>> incidence(const GridCase& grid);

// Empty when the state is admissible; otherwise one message per violation
// (out-of-range ids, duplicate opens via non-mask input, or a disconnected
// closed subgraph).
std::vector<std::string> validate_switching(const GridCase& grid, const SwitchingState& state);

}  // namespace ots
