#include <fstream>

#include <json.hpp>

#include "ots/dc_analysis.hpp"
#include "ots/errors.hpp"

namespace ots {

namespace {

using nlohmann::json;

json outcome_to_json(const ContingencyOutcome& outcome) {
  json j;
  if (outcome.contingency == kBaseCase)
    j["contingency"] = "base";
  else
    j["contingency"] = outcome.contingency;
  j["energized"] = json::array();
  for (std::uint8_t b : outcome.energized.energized) j["energized"].push_back(b ? 1 : 0);
  j["sigma"] = outcome.sigma;
  j["flows_mw"] = outcome.flows_mw;
  j["overloads"] = outcome.overloads;
  j["load_lost_mw"] = outcome.load_lost_mw;
  return j;
}

ContingencyOutcome outcome_from_json(const json& j, int source) {
  ContingencyOutcome outcome;
  if (j.at("contingency").is_string()) {
    if (j.at("contingency").get<std::string>() != "base")
      throw ParseError("outcome contingency must be a branch id or \"base\"");
    outcome.contingency = kBaseCase;
  } else {
    outcome.contingency = j.at("contingency").get<int>();
  }
  outcome.energized.source = source;
  for (const auto& b : j.at("energized"))
    outcome.energized.energized.push_back(b.get<int>() ? 1 : 0);
  outcome.sigma = j.at("sigma").get<double>();
  outcome.flows_mw = j.at("flows_mw").get<std::vector<double>>();
  outcome.overloads = j.at("overloads").get<std::vector<int>>();
  outcome.load_lost_mw = j.at("load_lost_mw").get<double>();
  return outcome;
}

json report_to_json(const SecurityReport& report) {
  json j;
  j["state"] = report.state.open_ids();
  j["risk_mw"] = report.risk_mw;
  j["base"] = outcome_to_json(report.base);
  j["contingencies"] = json::array();
  for (const ContingencyOutcome& outcome : report.contingencies)
    j["contingencies"].push_back(outcome_to_json(outcome));
  j["overloading_contingencies"] = report.overloading_contingencies;
  j["deenergizing_contingencies"] = report.deenergizing_contingencies;
  j["avg_loss_fraction_all"] = report.avg_loss_fraction_all;
  j["avg_loss_fraction_deenergizing"] = report.avg_loss_fraction_deenergizing;
  return j;
}

SecurityReport report_from_json(const json& j) {
  try {
    SecurityReport report;
    report.base = outcome_from_json(j.at("base"), -1);
    const std::size_t num_branches = report.base.flows_mw.size();
    report.state = SwitchingState::all_closed(num_branches);
    for (const auto& id : j.at("state"))
      report.state.open[id.get<std::size_t>()] = 1;
    report.risk_mw = j.at("risk_mw").get<double>();
    for (const auto& jo : j.at("contingencies"))
      report.contingencies.push_back(outcome_from_json(jo, -1));
    report.overloading_contingencies = j.at("overloading_contingencies").get<int>();
    report.deenergizing_contingencies = j.at("deenergizing_contingencies").get<int>();
    report.avg_loss_fraction_all = j.at("avg_loss_fraction_all").get<double>();
    report.avg_loss_fraction_deenergizing = j.at("avg_loss_fraction_deenergizing").get<double>();
    return report;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed report: ") + ex.what());
  }
}

bool outcome_schema_equal(const ContingencyOutcome& a, const ContingencyOutcome& b) {
  return a.contingency == b.contingency && a.energized.energized == b.energized.energized &&
         a.sigma == b.sigma && a.flows_mw == b.flows_mw && a.overloads == b.overloads &&
         a.load_lost_mw == b.load_lost_mw;
}

}  // namespace

std::string report_to_json_string(const SecurityReport& report) {
  return report_to_json(report).dump(2);
}

SecurityReport report_from_json_string(const std::string& text) {
  try {
    return report_from_json(json::parse(text));
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed report: ") + ex.what());
  }
}

void save_report(const SecurityReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report " + path.string());
  out << report_to_json_string(report) << '\n';
}

SecurityReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read report " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return report_from_json_string(text);
}

bool report_schema_equal(const SecurityReport& a, const SecurityReport& b) {
  if (!(a.state == b.state && a.risk_mw == b.risk_mw &&
        a.overloading_contingencies == b.overloading_contingencies &&
        a.deenergizing_contingencies == b.deenergizing_contingencies &&
        a.avg_loss_fraction_all == b.avg_loss_fraction_all &&
        a.avg_loss_fraction_deenergizing == b.avg_loss_fraction_deenergizing))
    return false;
  if (!outcome_schema_equal(a.base, b.base)) return false;
  if (a.contingencies.size() != b.contingencies.size()) return false;
  for (std::size_t i = 0; i < a.contingencies.size(); ++i)
    if (!outcome_schema_equal(a.contingencies[i], b.contingencies[i])) return false;
  return true;
}

}  // namespace ots
