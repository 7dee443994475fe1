#include "ots/matpower.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ots/errors.hpp"

namespace ots {

namespace {

struct Matrix {
  std::vector<std::vector<double>> rows;
};

std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_comment = false;
  for (char ch : text) {
    if (ch == '%') in_comment = true;
    if (ch == '\n') in_comment = false;
    out.push_back(in_comment ? ' ' : ch);
  }
  return out;
}

double parse_scalar(const std::string& text, const std::string& field) {
  const std::string key = "mpc." + field;
  auto pos = text.find(key);
  if (pos == std::string::npos) throw ParseError("missing " + key);
  pos = text.find('=', pos);
  if (pos == std::string::npos) throw ParseError("missing value for " + key);
  std::istringstream in(text.substr(pos + 1));
  double value = 0.0;
  if (!(in >> value)) throw ParseError("unreadable value for " + key);
  return value;
}

Matrix parse_matrix(const std::string& text, const std::string& field) {
  const std::string key = "mpc." + field;
  auto pos = text.find(key);
  if (pos == std::string::npos) throw ParseError("missing " + key);
  const auto open = text.find('[', pos);
  const auto close = text.find(']', open);
  if (open == std::string::npos || close == std::string::npos)
    throw ParseError("missing matrix body for " + key);

  Matrix matrix;
  std::string body = text.substr(open + 1, close - open - 1);
  for (char& ch : body)
    if (ch == ';') ch = '\n';
  std::istringstream lines(body);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::vector<double> row;
    double value = 0.0;
    while (fields >> value) row.push_back(value);
    if (!row.empty()) matrix.rows.push_back(std::move(row));
  }
  return matrix;
}

std::map<int, double> parse_limits_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read limits override " + path.string());
  std::map<int, double> limits;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    int id = 0;
    double limit = 0.0;
    if (fields >> id >> limit) limits[id] = limit;
  }
  return limits;
}

void note(std::vector<std::string>* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

}  // namespace

GridCase import_matpower(const std::filesystem::path& path, const MatpowerOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read MATPOWER case " + path.string());
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string text = strip_comments(raw);

  const double base_mva = parse_scalar(text, "baseMVA");
  const Matrix bus_rows = parse_matrix(text, "bus");
  const Matrix gen_rows = parse_matrix(text, "gen");
  const Matrix branch_rows = parse_matrix(text, "branch");

  std::map<int, int> bus_index;  // original number -> 0-based id
  std::vector<Bus> buses;
  for (const auto& row : bus_rows.rows) {
    if (row.size() < 3) throw ParseError("bus row with fewer than 3 columns");
    const int original = static_cast<int>(row[0]);
    if (bus_index.count(original))
      throw ParseError("bus " + std::to_string(original) + " appears twice");
    Bus bus;
    bus.id = static_cast<int>(buses.size());
    bus.label = std::to_string(original);
    bus.load_mw = row[2];
    if (bus.load_mw < 0)
      throw ParseError("bus " + bus.label + " has negative load; not representable");
    bus_index[original] = bus.id;
    buses.push_back(std::move(bus));
  }

  for (const auto& row : gen_rows.rows) {
    if (row.size() < 8) throw ParseError("gen row with fewer than 8 columns");
    if (row[7] <= 0) continue;  // out of service
    const auto it = bus_index.find(static_cast<int>(row[0]));
    if (it == bus_index.end()) throw ParseError("generator at unknown bus");
    if (row[1] < 0)
      throw ParseError("generator at bus " + std::to_string(static_cast<int>(row[0])) +
                       " has negative output; not representable");
    buses[static_cast<std::size_t>(it->second)].gen_mw += row[1];
  }

  std::map<int, double> override_limits;
  if (!options.limits_override.empty()) override_limits = parse_limits_csv(options.limits_override);

  std::vector<Branch> branches;
  for (const auto& row : branch_rows.rows) {
    if (row.size() < 11) throw ParseError("branch row with fewer than 11 columns");
    if (row[10] <= 0) continue;  // out of service
    const auto from = bus_index.find(static_cast<int>(row[0]));
    const auto to = bus_index.find(static_cast<int>(row[1]));
    if (from == bus_index.end() || to == bus_index.end())
      throw ParseError("branch references an unknown bus");
    if (row[3] <= 0) throw ParseError("branch with non-positive reactance; not representable");
    Branch br;
    br.id = static_cast<int>(branches.size());
    br.from = from->second;
    br.to = to->second;
    br.susceptance_pu = 1.0 / row[3];
    br.limit_mw = row[5];  // rateA; 0 means unlimited in the source format
    branches.push_back(br);
  }

  if (options.collapse_parallel) {
    std::map<std::pair<int, int>, std::size_t> first;
    std::vector<Branch> merged;
    for (const Branch& br : branches) {
      const auto key = std::minmax(br.from, br.to);
      auto [it, inserted] = first.try_emplace(key, merged.size());
      if (inserted) {
        Branch copy = br;
        copy.id = static_cast<int>(merged.size());
        merged.push_back(copy);
      } else {
        Branch& target = merged[it->second];
        target.susceptance_pu += br.susceptance_pu;
        target.limit_mw += br.limit_mw;
        note(options.warnings, "merged parallel branch between buses " +
                                   buses[static_cast<std::size_t>(br.from)].label + " and " +
                                   buses[static_cast<std::size_t>(br.to)].label);
      }
    }
    branches = std::move(merged);
  }

  for (Branch& br : branches) {
    const auto it = override_limits.find(br.id);
    if (it != override_limits.end()) {
      br.limit_mw = it->second;
    } else if (br.limit_mw <= 0) {
      throw ParseError("branch " + std::to_string(br.id) +
                       " has no rateA; supply a limits override");
    }
  }

  double total_gen = 0.0, total_load = 0.0;
  for (const Bus& bus : buses) {
    total_gen += bus.gen_mw;
    total_load += bus.load_mw;
  }
  if (std::abs(total_gen - total_load) > 1e-9 * std::max(1.0, total_load)) {
    auto largest = std::max_element(buses.begin(), buses.end(), [](const Bus& a, const Bus& b) {
      return a.gen_mw < b.gen_mw;
    });
    const double adjusted = largest->gen_mw + (total_load - total_gen);
    if (adjusted < 0)
      throw ParseError("cannot balance the case: generation exceeds load by more than the "
                       "largest generator's output");
    std::ostringstream message;
    message << "rebalanced generator at bus " << largest->label << " from " << largest->gen_mw
            << " to " << adjusted << " MW to match total load";
    note(options.warnings, message.str());
    largest->gen_mw = adjusted;
  }

  std::vector<int> contingencies(branches.size());
  std::map<int, double> probabilities;
  for (std::size_t e = 0; e < branches.size(); ++e) {
    contingencies[e] = static_cast<int>(e);
    probabilities[static_cast<int>(e)] = 1.0 / static_cast<double>(branches.size());
  }

  return GridCase(base_mva, std::move(buses), std::move(branches), std::move(contingencies),
                  std::move(probabilities), SourcePolicy::largest_generator());
}

}  // namespace ots
