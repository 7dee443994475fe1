#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ots/dc_analysis.hpp"
#include "ots/dot_report.hpp"
#include "ots/grid.hpp"
#include "support.hpp"

using namespace ots;

namespace {

int count_edges(const std::string& dot) {
  int n = 0;
  for (std::size_t at = dot.find(" -> "); at != std::string::npos; at = dot.find(" -> ", at + 1))
    ++n;
  return n;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("the all-closed base panel is fully green") {
  const GridCase grid = load_case(testutil::fixture_path());
  const SwitchingState closed = SwitchingState::all_closed(20);
  const SecurityReport report = security_report(grid, closed);

  const std::string dot = render_dot(grid, closed, report.base);
  CHECK(dot.rfind("digraph outcome {\n", 0) == 0);
  CHECK(dot.find("graph [label=\"base case\", labelloc=\"t\", fontname=\"Helvetica\"]") !=
        std::string::npos);
  CHECK(count_edges(dot) == 20);
  CHECK(dot.find("red") == std::string::npos);
  CHECK(dot.find("dashed") == std::string::npos);
  CHECK(dot.find("color=green4") != std::string::npos);

  // Bus H neither generates nor consumes: a square at the minimum size.
  CHECK(dot.find("b7 [label=\"H\\n0.0\", shape=square, width=0.35];") != std::string::npos);
  // Whichever bus carries the largest net injection gets the full width.
  CHECK(dot.find("width=1.10") != std::string::npos);

  CHECK(render_dot(grid, closed, report.base) == dot);
}

TEST_CASE("a tripped pendant branch is dashed and its bus annotated") {
  const GridCase grid = load_case(testutil::fixture_path());
  const SwitchingState closed = SwitchingState::all_closed(20);
  const SecurityReport report = security_report(grid, closed);

  const ContingencyOutcome& gh = report.contingencies[13];
  REQUIRE(gh.contingency == 13);
  const std::string dot = render_dot(grid, closed, gh);
  // H carries no load, so losing it costs nothing and the title stays plain.
  CHECK(dot.find("label=\"contingency GH\", labelloc") != std::string::npos);
  CHECK(dot.find("Helvetica-Bold") == std::string::npos);
  CHECK(dot.find("[style=dashed, color=black, arrowhead=none];") != std::string::npos);
  CHECK(dot.find("b7 [label=\"H [0.0]\\n0.0\"") != std::string::npos);
  CHECK(count_edges(dot) == 20);
}

TEST_CASE("an overloaded branch is drawn red with its flow") {
  const GridCase grid = load_case(testutil::fixture_path());
  const int ids[] = {14, 16, 17};
  const SwitchingState state = SwitchingState::from_ids(20, ids);
  const SecurityReport report = security_report(grid, state);

  const ContingencyOutcome& ae = report.contingencies[1];
  REQUIRE(ae.contingency == 1);
  const std::string dot = render_dot(grid, state, ae);
  CHECK(dot.find("label=\"contingency AE\", labelloc") != std::string::npos);
  CHECK(dot.find("color=red, fontcolor=red") != std::string::npos);
  CHECK(dot.find("label=\"76.0\"") != std::string::npos);
  // 17 branches stay closed, one of them dashed as the outage.
  CHECK(count_edges(dot) == 17);
  CHECK(dot.find("style=dashed") != std::string::npos);
}

TEST_CASE("losses make the title bold and the dead area black") {
  const GridCase grid = load_case(testutil::fixture_path());
  const int ids[] = {5, 7, 8, 19};
  const SwitchingState state = SwitchingState::from_ids(20, ids);
  const SecurityReport report = security_report(grid, state);

  const std::string base = render_dot(grid, state, report.base);
  CHECK(count_edges(base) == 16);  // preventively opened branches vanish
  CHECK(base.find("b2 -> b3") == std::string::npos);
  CHECK(base.find("b3 -> b2") == std::string::npos);
  CHECK(base.find("red") == std::string::npos);

  // With MN already open, tripping IN strands bus N and its 14.9 MW.
  const ContingencyOutcome& in_trip = report.contingencies[16];
  REQUIRE(in_trip.contingency == 16);
  CHECK(in_trip.load_lost_mw == doctest::Approx(14.9));
  const std::string dot = render_dot(grid, state, in_trip);
  CHECK(dot.find("label=\"contingency IN [14.9 MW lost]\"") != std::string::npos);
  CHECK(dot.find("fontname=\"Helvetica-Bold\"") != std::string::npos);
  CHECK(dot.find("b13 [label=\"N [14.9]\\n0.0\"") != std::string::npos);
}

TEST_CASE("emitted files cover the base and every contingency in order") {
  const GridCase grid = load_case(testutil::fixture_path());
  const SwitchingState closed = SwitchingState::all_closed(20);
  const SecurityReport report = security_report(grid, closed);

  const auto dir = std::filesystem::temp_directory_path() / "ots_dot_test";
  std::filesystem::remove_all(dir);
  const std::vector<std::string> names = emit_dot(grid, report, dir);
  REQUIRE(names.size() == 21);
  CHECK(names[0] == "base.dot");
  CHECK(names[1] == "contingency_00.dot");
  CHECK(names[20] == "contingency_19.dot");
  for (const std::string& name : names) CHECK(std::filesystem::file_size(dir / name) > 0);
  CHECK(slurp(dir / "base.dot") == render_dot(grid, closed, report.base));
  CHECK(slurp(dir / "contingency_13.dot") == render_dot(grid, closed, report.contingencies[13]));

  // A second emission writes byte-identical files.
  const std::string before = slurp(dir / "contingency_05.dot");
  emit_dot(grid, report, dir);
  CHECK(slurp(dir / "contingency_05.dot") == before);
  std::filesystem::remove_all(dir);
}

TEST_CASE("tiny grids render without special cases") {
  const GridCase grid = testutil::two_bus_case();
  const SwitchingState closed = SwitchingState::all_closed(1);
  const SecurityReport report = security_report(grid, closed);

  const std::string base = render_dot(grid, closed, report.base);
  CHECK(base.find("b0 [label=\"A\\n1.0\", shape=circle, width=1.10];") != std::string::npos);
  CHECK(base.find("b1 [label=\"B\\n-1.0\", shape=square, width=1.10];") != std::string::npos);
  CHECK(count_edges(base) == 1);

  // The single contingency blacks out B entirely.
  const std::string dot = render_dot(grid, closed, report.contingencies[0]);
  CHECK(dot.find("label=\"contingency AB [1.0 MW lost]\"") != std::string::npos);
  CHECK(dot.find("b1 [label=\"B [1.0]\\n0.0\"") != std::string::npos);
  CHECK(dot.find("style=dashed") != std::string::npos);
}
