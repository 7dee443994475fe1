#include "ots/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "ots/errors.hpp"

namespace ots {

namespace {

using nlohmann::json;

constexpr double kBalanceRelTol = 1e-6;

// Minimal union-find, used so switching validation does not share a code
// path with the connectivity module it is tested against.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

SwitchingState SwitchingState::from_ids(std::size_t num_branches, std::span<const int> ids) {
  SwitchingState state = all_closed(num_branches);
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= num_branches)
      throw ValidationError("switching state references unknown branch " + std::to_string(id));
    state.open[static_cast<std::size_t>(id)] = 1;
  }
  return state;
}

int SwitchingState::open_count() const {
  return static_cast<int>(std::count(open.begin(), open.end(), std::uint8_t{1}));
}

std::vector<int> SwitchingState::open_ids() const {
  std::vector<int> ids;
  for (std::size_t e = 0; e < open.size(); ++e)
    if (open[e]) ids.push_back(static_cast<int>(e));
  return ids;
}

GridCase::GridCase(double base_mva, std::vector<Bus> buses, std::vector<Branch> branches,
                   std::vector<int> contingencies, std::map<int, double> probabilities,
                   SourcePolicy source_policy)
    : base_mva_(base_mva),
      buses_(std::move(buses)),
      branches_(std::move(branches)),
      contingencies_(std::move(contingencies)),
      probabilities_(std::move(probabilities)),
      source_policy_(source_policy) {
  require(std::isfinite(base_mva_) && base_mva_ > 0, "base_mva must be positive");
  require(!buses_.empty(), "a grid needs at least one bus");
  require(!branches_.empty(), "a grid needs at least one branch");

  const int nb = num_buses();
  for (int i = 0; i < nb; ++i) {
    const Bus& bus = buses_[static_cast<std::size_t>(i)];
    require(bus.id == i, "bus ids must be 0-based and contiguous in order");
    require(!bus.label.empty(), "bus " + std::to_string(i) + " has an empty label");
    require(std::isfinite(bus.gen_mw) && bus.gen_mw >= 0,
            "bus " + bus.label + " has invalid generation");
    require(std::isfinite(bus.load_mw) && bus.load_mw >= 0,
            "bus " + bus.label + " has invalid load");
    total_gen_ += bus.gen_mw;
    total_load_ += bus.load_mw;
  }

  incident_.assign(static_cast<std::size_t>(nb), {});
  for (int e = 0; e < num_branches(); ++e) {
    const Branch& br = branches_[static_cast<std::size_t>(e)];
    require(br.id == e, "branch ids must be 0-based and contiguous in order");
    require(br.from >= 0 && br.from < nb && br.to >= 0 && br.to < nb,
            "branch " + std::to_string(e) + " references an unknown bus");
    require(br.from != br.to, "branch " + std::to_string(e) + " is a self-loop");
    require(std::isfinite(br.susceptance_pu) && br.susceptance_pu > 0,
            "branch " + std::to_string(e) + " needs a positive susceptance");
    require(std::isfinite(br.limit_mw) && br.limit_mw > 0,
            "branch " + std::to_string(e) + " needs a positive flow limit");
    incident_[static_cast<std::size_t>(br.from)].push_back(e);
    incident_[static_cast<std::size_t>(br.to)].push_back(e);
  }

  require(std::abs(total_gen_ - total_load_) <= kBalanceRelTol * std::max(1.0, total_load_),
          "total generation must match total load");

  {
    DisjointSets sets(nb);
    for (const Branch& br : branches_) sets.unite(br.from, br.to);
    const int root = sets.find(0);
    for (int i = 1; i < nb; ++i)
      require(sets.find(i) == root, "the grid must be connected with all branches closed");
  }

  std::vector<std::uint8_t> seen(static_cast<std::size_t>(num_branches()), 0);
  for (int c : contingencies_) {
    require(c >= 0 && c < num_branches(),
            "contingency references unknown branch " + std::to_string(c));
    require(!seen[static_cast<std::size_t>(c)],
            "contingency " + std::to_string(c) + " listed twice");
    seen[static_cast<std::size_t>(c)] = 1;
    auto it = probabilities_.find(c);
    require(it != probabilities_.end(),
            "contingency " + std::to_string(c) + " has no probability");
    require(std::isfinite(it->second) && it->second >= 0 && it->second <= 1,
            "contingency " + std::to_string(c) + " has a probability outside [0, 1]");
  }
  for (const auto& [id, p] : probabilities_) {
    (void)p;
    require(id >= 0 && id < num_branches() && seen[static_cast<std::size_t>(id)],
            "probability given for non-contingency branch " + std::to_string(id));
  }

  if (source_policy_.kind == SourcePolicy::Kind::ExplicitBus) {
    require(source_policy_.bus >= 0 && source_policy_.bus < nb,
            "source_policy names an unknown bus");
  }
}

int GridCase::opposite(int branch, int bus) const {
  const Branch& br = branches_[static_cast<std::size_t>(branch)];
  if (br.from == bus) return br.to;
  if (br.to == bus) return br.from;
  throw ValidationError("bus " + std::to_string(bus) + " is not an endpoint of branch " +
                        std::to_string(branch));
}

bool GridCase::operator==(const GridCase& other) const {
  auto bus_eq = [](const Bus& a, const Bus& b) {
    return a.id == b.id && a.label == b.label && a.gen_mw == b.gen_mw && a.load_mw == b.load_mw;
  };
  auto branch_eq = [](const Branch& a, const Branch& b) {
    return a.id == b.id && a.from == b.from && a.to == b.to &&
           a.susceptance_pu == b.susceptance_pu && a.limit_mw == b.limit_mw;
  };
  return base_mva_ == other.base_mva_ &&
         std::equal(buses_.begin(), buses_.end(), other.buses_.begin(), other.buses_.end(),
                    bus_eq) &&
         std::equal(branches_.begin(), branches_.end(), other.branches_.begin(),
                    other.branches_.end(), branch_eq) &&
         contingencies_ == other.contingencies_ && probabilities_ == other.probabilities_ &&
         source_policy_ == other.source_policy_;
}

namespace {

GridCase case_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("case file must hold a JSON object");
  try {
    std::vector<Bus> buses;
    for (const auto& jb : j.at("buses")) {
      Bus bus;
      bus.id = jb.at("id").get<int>();
      bus.label = jb.at("label").get<std::string>();
      bus.gen_mw = jb.value("gen_mw", 0.0);
      bus.load_mw = jb.value("load_mw", 0.0);
      buses.push_back(std::move(bus));
    }
    std::vector<Branch> branches;
    for (const auto& jb : j.at("branches")) {
      Branch br;
      br.id = jb.at("id").get<int>();
      br.from = jb.at("from").get<int>();
      br.to = jb.at("to").get<int>();
      br.susceptance_pu = jb.at("susceptance_pu").get<double>();
      br.limit_mw = jb.at("limit_mw").get<double>();
      branches.push_back(br);
    }
    std::vector<int> contingencies = j.value("contingencies", std::vector<int>{});
    std::map<int, double> probabilities;
    if (j.contains("probabilities")) {
      for (const auto& [key, value] : j.at("probabilities").items()) {
        std::size_t used = 0;
        int id = std::stoi(key, &used);
        if (used != key.size()) throw ParseError("probability key '" + key + "' is not a branch id");
        probabilities[id] = value.get<double>();
      }
    }
    SourcePolicy policy = SourcePolicy::largest_generator();
    if (j.contains("source_policy")) {
      const auto& sp = j.at("source_policy");
      if (sp.is_string()) {
        if (sp.get<std::string>() != "largest_generator")
          throw ParseError("unknown source_policy '" + sp.get<std::string>() + "'");
      } else if (sp.is_object() && sp.contains("bus")) {
        policy = SourcePolicy::explicit_bus(sp.at("bus").get<int>());
      } else {
        throw ParseError("source_policy must be \"largest_generator\" or {\"bus\": id}");
      }
    }
    return GridCase(j.at("base_mva").get<double>(), std::move(buses), std::move(branches),
                    std::move(contingencies), std::move(probabilities), policy);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed case: ") + ex.what());
  }
}

json case_to_json(const GridCase& grid) {
  json j;
  j["base_mva"] = grid.base_mva();
  j["buses"] = json::array();
  for (const Bus& bus : grid.buses()) {
    j["buses"].push_back(
        {{"id", bus.id}, {"label", bus.label}, {"gen_mw", bus.gen_mw}, {"load_mw", bus.load_mw}});
  }
  j["branches"] = json::array();
  for (const Branch& br : grid.branches()) {
    j["branches"].push_back({{"id", br.id},
                             {"from", br.from},
                             {"to", br.to},
                             {"susceptance_pu", br.susceptance_pu},
                             {"limit_mw", br.limit_mw}});
  }
  j["contingencies"] = grid.contingencies();
  json probs = json::object();
  for (const auto& [id, p] : grid.probabilities()) probs[std::to_string(id)] = p;
  j["probabilities"] = probs;
  if (grid.source_policy().kind == SourcePolicy::Kind::LargestGenerator)
    j["source_policy"] = "largest_generator";
  else
    j["source_policy"] = json{{"bus", grid.source_policy().bus}};
  return j;
}

}  // namespace

GridCase load_case(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read case file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
  return case_from_json(j);
}

void save_case(const GridCase& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write case file " + path.string());
  out << case_to_json(grid).dump(2) << '\n';
}

std::string case_to_json_string(const GridCase& grid) { return case_to_json(grid).dump(2); }

GridCase case_from_json_string(const std::string& text) {
  try {
    return case_from_json(json::parse(text));
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed case: ") + ex.what());
  }
}

std::vector<std::vector<double>> incidence(const GridCase& grid) {
  std::vector<std::vector<double>> a(
      static_cast<std::size_t>(grid.num_buses()),
      std::vector<double>(static_cast<std::size_t>(grid.num_branches()), 0.0));
  for (const Branch& br : grid.branches()) {
    a[static_cast<std::size_t>(br.to)][static_cast<std::size_t>(br.id)] = 1.0;
    a[static_cast<std::size_t>(br.from)][static_cast<std::size_t>(br.id)] = -1.0;
  }
  return a;
}

std::vector<std::string> validate_switching(const GridCase& grid, const SwitchingState& state) {
  std::vector<std::string> problems;
  if (state.open.size() != static_cast<std::size_t>(grid.num_branches())) {
    problems.push_back("state covers " + std::to_string(state.open.size()) + " branches, grid has " +
                       std::to_string(grid.num_branches()));
    return problems;
  }
  DisjointSets sets(grid.num_buses());
  for (const Branch& br : grid.branches())
    if (!state.is_open(br.id)) sets.unite(br.from, br.to);
  const int root = sets.find(0);
  for (int i = 1; i < grid.num_buses(); ++i) {
    if (sets.find(i) != root) {
      std::string ids;
      for (int id : state.open_ids()) ids += (ids.empty() ? "" : ", ") + std::to_string(id);
      problems.push_back("opening {" + ids + "} disconnects the grid");
      break;
    }
  }
  return problems;
}

}  // namespace ots
