#include "ots/dot_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ots/errors.hpp"

namespace ots {

namespace {

std::string fixed1(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string branch_display_name(const GridCase& grid, int branch) {
  const Branch& br = grid.branches()[static_cast<std::size_t>(branch)];
  const std::string& a = grid.buses()[static_cast<std::size_t>(br.from)].label;
  const std::string& b = grid.buses()[static_cast<std::size_t>(br.to)].label;
  if (a.size() == 1 && b.size() == 1) return a + b;
  return a + "-" + b;
}

}  // namespace

std::string render_dot(const GridCase& grid, const SwitchingState& state,
                       const ContingencyOutcome& outcome) {
  const bool base = outcome.contingency == kBaseCase;
  std::string title = base ? "base case" : "contingency " + branch_display_name(grid, outcome.contingency);
  const bool lossy = outcome.load_lost_mw > 0;
  if (lossy) title += " [" + fixed1(outcome.load_lost_mw) + " MW lost]";

  std::string out;
  out += "digraph outcome {\n";
  out += "  graph [label=\"" + title + "\", labelloc=\"t\", fontname=\"" +
         std::string(lossy ? "Helvetica-Bold" : "Helvetica") + "\"];\n";
  out += "  node [fontname=\"Helvetica\", fontsize=10];\n";
  out += "  edge [fontname=\"Helvetica\", fontsize=9];\n";

  double max_injection = 0.0;
  std::vector<double> net(static_cast<std::size_t>(grid.num_buses()), 0.0);
  for (const Bus& bus : grid.buses()) {
    if (outcome.energized.is_energized(bus.id))
      net[static_cast<std::size_t>(bus.id)] = outcome.sigma * bus.gen_mw - bus.load_mw;
    max_injection = std::max(max_injection, std::abs(net[static_cast<std::size_t>(bus.id)]));
  }

  for (const Bus& bus : grid.buses()) {
    const bool energized = outcome.energized.is_energized(bus.id);
    std::string label = bus.label;
    if (!energized) label += " [" + fixed1(bus.load_mw) + "]";
    label += "\\n" + fixed1(net[static_cast<std::size_t>(bus.id)]);
    const double scale =
        max_injection > 0 ? std::abs(net[static_cast<std::size_t>(bus.id)]) / max_injection : 0.0;
    out += "  b" + std::to_string(bus.id) + " [label=\"" + label + "\", shape=" +
           (bus.gen_mw > 0 ? "circle" : "square") + ", width=" + fixed2(0.35 + 0.75 * scale) +
           "];\n";
  }

  for (const Branch& br : grid.branches()) {
    if (state.is_open(br.id)) continue;  // preventively opened: not drawn
    const std::string from = "b" + std::to_string(br.from);
    const std::string to = "b" + std::to_string(br.to);
    if (br.id == outcome.contingency) {
      out += "  " + from + " -> " + to + " [style=dashed, color=black, arrowhead=none];\n";
      continue;
    }
    const bool dead = !outcome.energized.is_energized(br.from) ||
                      !outcome.energized.is_energized(br.to);
    if (dead) {
      out += "  " + from + " -> " + to + " [color=black, arrowhead=none];\n";
      continue;
    }
    const double flow = outcome.flows_mw[static_cast<std::size_t>(br.id)];
    const bool overloaded = std::binary_search(outcome.overloads.begin(),
                                               outcome.overloads.end(), br.id);
    const char* color = overloaded ? "red" : "green4";
    // Positive flow runs toward the origin bus; draw the physical direction.
    const std::string tail = flow > 0 ? to : from;
    const std::string head = flow > 0 ? from : to;
    out += "  " + tail + " -> " + head + " [label=\"" + fixed1(std::abs(flow)) + "\", color=" +
           color + ", fontcolor=" + color + "];\n";
  }
  out += "}\n";
  return out;
}

std::vector<std::string> emit_dot(const GridCase& grid, const SecurityReport& report,
                                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());

  std::vector<std::string> written;
  auto write_file = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    out << content;
    written.push_back(name);
  };

  write_file("base.dot", render_dot(grid, report.state, report.base));
  for (const ContingencyOutcome& outcome : report.contingencies) {
    char name[40];
    std::snprintf(name, sizeof name, "contingency_%02d.dot", outcome.contingency);
    write_file(name, render_dot(grid, report.state, outcome));
  }
  return written;
}

}  // namespace ots
