#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ots/errors.hpp"
#include "ots/matpower.hpp"
#include "support.hpp"

using namespace ots;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

const std::string kTwinCase = R"(function mpc = twin
mpc.version = '2';
mpc.baseMVA = 100;
mpc.bus = [
	1	3	0	0	0	0	1	1	0	345	1	1.1	0.9;
	2	1	50	0	0	0	1	1	0	345	1	1.1	0.9;
];
mpc.gen = [
	1	50	0	300	-300	1	100	1	250	10;
];
mpc.branch = [
	1	2	0	0.1	0	40	0	0	0	0	1	-360	360;
	1	2	0	0.1	0	40	0	0	0	0	1	-360	360;
	1	2	0	0.1	0	40	0	0	0	0	0	-360	360;
];
)";

}  // namespace

TEST_CASE("case14 import with the shipped limits override") {
  std::vector<std::string> warnings;
  MatpowerOptions options;
  options.limits_override = testutil::case_dir() + "/case14_limits.csv";
  options.warnings = &warnings;
  const GridCase grid = import_matpower(testutil::case_dir() + "/case14.m", options);

  CHECK(grid.num_buses() == 14);
  CHECK(grid.num_branches() == 20);
  CHECK(grid.base_mva() == doctest::Approx(100.0));
  CHECK(grid.buses()[0].label == "1");
  CHECK(grid.buses()[13].label == "14");

  // Susceptance is the reactance reciprocal; branch 0 is 1-2 with x=0.05917.
  CHECK(grid.branches()[0].susceptance_pu == doctest::Approx(1.0 / 0.05917));
  CHECK(grid.branches()[0].from == 0);
  CHECK(grid.branches()[0].to == 1);

  // The slack generator absorbs the mismatch: 232.4 -> 219 against 259 load.
  CHECK(grid.total_load_mw() == doctest::Approx(259.0));
  CHECK(grid.total_gen_mw() == doctest::Approx(259.0));
  CHECK(grid.buses()[0].gen_mw == doctest::Approx(219.0));
  CHECK(grid.buses()[1].gen_mw == doctest::Approx(40.0));
  bool noted = false;
  for (const std::string& w : warnings) noted = noted || w.find("rebalanced") != std::string::npos;
  CHECK(noted);

  // Ratings come from the override file.
  CHECK(grid.branches()[8].limit_mw == doctest::Approx(17.8));
  CHECK(grid.branches()[0].limit_mw == doctest::Approx(219.2));
  CHECK(grid.branches()[19].limit_mw == doctest::Approx(15.1));

  // Every branch is a contingency, uniformly weighted.
  CHECK(grid.contingencies().size() == 20);
  for (int c : grid.contingencies()) CHECK(grid.probability(c) == doctest::Approx(0.05));
}

TEST_CASE("case14 import matches the bundled native case") {
  MatpowerOptions options;
  options.limits_override = testutil::case_dir() + "/case14_limits.csv";
  const GridCase imported = import_matpower(testutil::case_dir() + "/case14.m", options);
  const GridCase native = load_case(testutil::fixture_path());
  REQUIRE(imported.num_branches() == native.num_branches());
  for (int e = 0; e < native.num_branches(); ++e) {
    CHECK(imported.branches()[e].from == native.branches()[e].from);
    CHECK(imported.branches()[e].to == native.branches()[e].to);
    CHECK(imported.branches()[e].susceptance_pu ==
          doctest::Approx(native.branches()[e].susceptance_pu));
    CHECK(imported.branches()[e].limit_mw == doctest::Approx(native.branches()[e].limit_mw));
  }
  for (int i = 0; i < native.num_buses(); ++i) {
    CHECK(imported.buses()[i].gen_mw == doctest::Approx(native.buses()[i].gen_mw));
    CHECK(imported.buses()[i].load_mw == doctest::Approx(native.buses()[i].load_mw));
  }
}

TEST_CASE("case9 imports with its own ratings") {
  const GridCase grid = import_matpower(testutil::case_dir() + "/case9.m");
  CHECK(grid.num_buses() == 9);
  CHECK(grid.num_branches() == 9);
  CHECK(grid.branches()[0].susceptance_pu == doctest::Approx(1.0 / 0.0576));
  CHECK(grid.branches()[0].limit_mw == doctest::Approx(250.0));
  // 320.3 MW of generation against 315 MW of load: the largest unit gives.
  CHECK(grid.total_gen_mw() == doctest::Approx(315.0));
  CHECK(grid.buses()[1].gen_mw == doctest::Approx(157.7));
}

TEST_CASE("missing ratings require an override") {
  const auto path = write_temp("ots_no_rate.m", R"(function mpc = bare
mpc.baseMVA = 100;
mpc.bus = [
	1	3	0	0	0	0	1	1	0	345	1	1.1	0.9;
	2	1	50	0	0	0	1	1	0	345	1	1.1	0.9;
];
mpc.gen = [
	1	50	0	300	-300	1	100	1	250	10;
];
mpc.branch = [
	1	2	0	0.1	0	0	0	0	0	0	1	-360	360;
];
)");
  CHECK_THROWS_WITH_AS(import_matpower(path), "branch 0 has no rateA; supply a limits override",
                       ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("parallel branches stay distinct by default and merge on request") {
  const auto path = write_temp("ots_twin.m", kTwinCase);

  const GridCase kept = import_matpower(path);
  CHECK(kept.num_branches() == 2);  // the out-of-service third row is dropped
  CHECK(kept.branches()[0].susceptance_pu == doctest::Approx(10.0));
  CHECK(kept.branches()[1].limit_mw == doctest::Approx(40.0));

  std::vector<std::string> warnings;
  MatpowerOptions options;
  options.collapse_parallel = true;
  options.warnings = &warnings;
  const GridCase merged = import_matpower(path, options);
  CHECK(merged.num_branches() == 1);
  CHECK(merged.branches()[0].susceptance_pu == doctest::Approx(20.0));
  CHECK(merged.branches()[0].limit_mw == doctest::Approx(80.0));
  CHECK_FALSE(warnings.empty());

  std::filesystem::remove(path);
}

TEST_CASE("unreadable and malformed inputs") {
  CHECK_THROWS_AS(import_matpower(testutil::case_dir() + "/nope.m"), IoError);
  const auto path = write_temp("ots_broken.m", "function mpc = broken\nmpc.baseMVA = 100;\n");
  CHECK_THROWS_AS(import_matpower(path), ParseError);
  std::filesystem::remove(path);
}
