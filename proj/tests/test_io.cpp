#include "decstab/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "decstab/generator.hpp"
#include "helpers.hpp"

using namespace decstab;
using namespace decstab::testing;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "decstab_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("plant files round-trip bit for bit") {
  std::mt19937_64 rng(601);
  for (int trial = 0; trial < 10; ++trial) {
    GeneratorOptions opt;
    opt.n = 2 + rng() % 5;
    opt.m = 1 + rng() % opt.n;
    const Plant p = random_certified_plant(rng(), opt);

    const std::string text = plant_to_text(p);
    const Plant q = parse_plant(text, "roundtrip");
    REQUIRE(q.n == p.n);
    REQUIRE(q.m == p.m);
    // Bitwise equality, not approximate.
    CHECK((q.A.array() == p.A.array()).all());
    CHECK((q.B.array() == p.B.array()).all());
    CHECK((q.C.array() == p.C.array()).all());
    // Serialize -> parse -> serialize is a fixed point.
    CHECK(plant_to_text(q) == text);
  }
}

TEST_CASE("plant parse errors name the offending field") {
  CHECK_THROWS_WITH_AS(parse_plant("{", "bad"), doctest::Contains("bad"),
                       ParseError);
  CHECK_THROWS_WITH_AS(
      parse_plant(R"({"n": 1, "m": 1, "A": [[0]], "B": [[1]]})", "f"),
      doctest::Contains("'C'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_plant(
          R"({"n": 1, "m": 1, "A": [["x"]], "B": [[1]], "C": [[1]]})", "f"),
      doctest::Contains("'A'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_plant(
          R"({"n": 2, "m": 1, "A": [[0]], "B": [[1]], "C": [[1]]})", "f"),
      doctest::Contains("shapes"), ParseError);
  // Well-formed file whose plant violates the rank assumptions.
  CHECK_THROWS_AS(
      parse_plant(
          R"({"n": 2, "m": 1, "A": [[0,0],[0,0]], "B": [[1],[1]],
              "C": [[1,-1]]})",
          "f"),
      AssumptionError);
}

TEST_CASE("schedule files round-trip and enforce the floor") {
  const auto dir = temp_dir();
  GainSynthesis gs;
  gs.gamma = 2.5;
  gs.bound = ExpBound{1.7, 0.4};
  gs.k_tilde = make_vector({1.0, 2.0});
  gs.k_bar = 2.0;
  gs.t_bar = 0.0;
  gs.schedule = GainSchedule::constant(make_vector({1.05, 2.1}));

  const auto path = dir / "schedule.json";
  save_schedule(gs, path);
  const ScheduleFile file = load_schedule(path);
  CHECK(file.gamma == 2.5);
  CHECK(file.bound.M11 == 1.7);
  CHECK(file.bound.beta11 == 0.4);
  CHECK((file.k_tilde - gs.k_tilde).norm() == 0.0);
  CHECK((file.schedule.at(1.0) - gs.schedule.at(1.0)).norm() == 0.0);

  // A hand-edited file that dips below its own floor is rejected.
  std::ofstream bad(dir / "bad_schedule.json");
  bad << R"({"schedule": {"kind": "constant", "t_bar": 0.0,
             "levels": [0.5, 2.1]}, "k_tilde": [1.0, 2.0]})";
  bad.close();
  CHECK_THROWS_AS(load_schedule(dir / "bad_schedule.json"), ScheduleError);
}

TEST_CASE("ramp and sinusoid schedules serialize losslessly") {
  const GainSchedule ramp =
      GainSchedule::ramp(make_vector({0.0}), make_vector({3.0}), 2.0);
  const GainSchedule ramp2 = schedule_from_json(schedule_to_json(ramp));
  CHECK(ramp2.at(1.0)(0) == doctest::Approx(1.5));
  CHECK(ramp2.t_bar() == 2.0);

  const GainSchedule sin = GainSchedule::sinusoid(-2.0, 18.0, 9.0);
  const GainSchedule sin2 = schedule_from_json(schedule_to_json(sin));
  CHECK(sin2.scalar_at(0.37) == sin.scalar_at(0.37));
}

TEST_CASE("trajectory export carries full precision") {
  Trajectory traj;
  traj.dt = 0.1;
  const double awkward = 1.0 / 3.0;
  for (int i = 0; i < 3; ++i) {
    Vector x(2);
    x << awkward * (i + 1), -awkward;
    traj.times.push_back(0.1 * i);
    traj.states.push_back(x);
    traj.norms_1.push_back(x.lpNorm<1>());
    traj.norms_2.push_back(x.norm());
  }
  const auto path = temp_dir() / "traj.csv";
  write_trajectory_csv(traj, path);

  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "time,x1,x2,norm1,norm2");
  std::getline(in, line);
  std::getline(in, line);  // second sample
  std::istringstream row(line);
  std::string cell;
  std::getline(row, cell, ',');  // time
  std::getline(row, cell, ',');  // x1 = 2/3
  CHECK(std::strtod(cell.c_str(), nullptr) == 2.0 * awkward);
}

TEST_CASE("reports are deterministic documents") {
  GeneratorOptions opt;
  opt.n = 3;
  opt.m = 2;
  const Plant p = random_certified_plant(99, opt);
  const AnalysisReport analysis = analyze_plant(p);
  const SynthesisReport synth = synthesize_pipeline(analysis);
  const SimulationReport sim = simulate_pipeline(analysis, synth);

  const std::string once = to_json(analysis).dump() + to_json(synth).dump() +
                           to_json(sim).dump();
  const AnalysisReport analysis2 = analyze_plant(p);
  const SynthesisReport synth2 = synthesize_pipeline(analysis2);
  const SimulationReport sim2 = simulate_pipeline(analysis2, synth2);
  const std::string twice = to_json(analysis2).dump() +
                            to_json(synth2).dump() + to_json(sim2).dump();
  CHECK(once == twice);

  const auto j = to_json(sim);
  CHECK(j.contains("checks"));
  CHECK(j["checks"].contains("coppel"));
  CHECK(j["checks"].contains("domination"));
  CHECK(j.contains("decay_rate"));
}
