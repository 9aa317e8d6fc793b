#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "homsamp/error.hpp"
#include "homsamp/experiment.hpp"
#include "homsamp/io.hpp"
#include "support.hpp"

using namespace homsamp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("homsamp_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  testing::Gen gen(3);
  for (int t = 0; t < 1000; ++t) {
    const double v = gen.uniform(-1, 1) * std::pow(10.0, gen.integer(-300, 300));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(kInfinity) == "inf");
  CHECK(format_double(-kInfinity) == "-inf");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("space and cube round-trips") {
  for (const char* g : {"torus-1d", "cantor-dset(3)", "anisotropic-square"}) {
    const auto space = discretize(g, 64);
    const auto back = space_from_json(space_to_json(space));
    REQUIRE(back.size() == space.size());
    CHECK(back.generator() == space.generator());
    for (std::size_t i = 0; i < space.size(); ++i) {
      CHECK(back.points()[i] == space.points()[i]);
      CHECK(back.weight(i) == space.weight(i));
    }
    CHECK(space_to_json(back) == space_to_json(space));

    const auto sys = build_dyadic_system(space, 0, space.generator().kind == GeneratorKind::cantor_dset ? 3 : 4);
    const auto sys2 = cubes_from_json(cubes_to_json(sys));
    CHECK(cubes_to_json(sys2) == cubes_to_json(sys));
    for (int j = sys.j_min(); j <= sys.j_max(); ++j) {
      REQUIRE(sys2.level(j).size() == sys.level(j).size());
      for (std::size_t k = 0; k < sys.level(j).size(); ++k) {
        CHECK(sys2.cube(j, k).members == sys.cube(j, k).members);
        CHECK(sys2.cube(j, k).children == sys.cube(j, k).children);
        CHECK(sys2.cube(j, k).parent == sys.cube(j, k).parent);
      }
    }
  }
  CHECK_THROWS_AS(space_from_json("{"), FormatError);
  CHECK_THROWS_AS(cubes_from_json("{\"levels\": 3}"), FormatError);
}

TEST_CASE("frame header rebuilds the same frame") {
  const auto& fx = testing::fixture("torus-1d", 128, 7);
  const auto f2 = frame_from_json(frame_header_json(fx.frame), fx.system, fx.space);
  CHECK(frame_header_json(f2) == frame_header_json(fx.frame));
  CHECK(frame_phi_csv(f2) == frame_phi_csv(fx.frame));
  const auto csv = frame_phi_csv(fx.frame);
  CHECK(csv.rfind("element,j,k,point,value\n", 0) == 0);
}

TEST_CASE("coefficients csv round-trip") {
  testing::Gen gen(5);
  for (int t = 0; t < 20; ++t) {
    const auto c = gen.table(gen.integer(0, 3), 1 + gen.index(5));
    const auto back = coefficients_from_csv(coefficients_csv(c));
    REQUIRE(back.same_shape(c));
    for (int j = c.j_min(); j <= c.j_max(); ++j) {
      for (std::size_t k = 0; k < c.level(j).size(); ++k) CHECK(back.at(j, k) == c.at(j, k));
    }
  }
  CHECK_THROWS_AS(coefficients_from_csv("j,k,value\n0,x,1\n"), FormatError);
}

TEST_CASE("config parsing") {
  const auto c = parse_experiment_config(R"cfg({
    "space": {"generator": "cantor-dset(4)", "resolution": 0},
    "cubes": {"j_min": 0, "j_max": 4},
    "frame": {"C_phi_target": 1.25, "profile": "smoothstep"},
    "battery": ["const", "sin:1"],
    "sampling": {"epsilons": [0.5], "p": [1, "inf"], "kappa": {"mode": "fixed", "value": 2.0}, "K": 3},
    "diagnostics": {"function": "sin:1", "level": 2},
    "seed": 7,
    "output": {"directory": "x", "formats": ["json"]}
  })cfg");
  CHECK(c.generator == "cantor-dset(4)");
  CHECK(c.j_max == 4);
  CHECK(c.cphi_target == 1.25);
  CHECK(c.profile == "smoothstep");
  CHECK(c.battery.size() == 2);
  CHECK(c.p_values == std::vector<double>{1.0, kInfinity});
  CHECK_FALSE(c.calibrate);
  CHECK(c.kappa == 2.0);
  CHECK(c.class_K == 3.0);
  CHECK(c.diagnostics_level == 2);
  CHECK(c.seed == 7);
  CHECK_FALSE(c.write_csv);
  CHECK(c.write_json);
  CHECK_THROWS_AS(parse_experiment_config("[1,"), FormatError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"sampling": {"kappa": {"mode": "guess"}}})"), InvalidArgument);
}

TEST_CASE("run_experiment: stage failure") {
  ExperimentConfig c;
  c.generator = "klein-bottle";
  c.battery = {"const"};
  c.output_directory = scratch("bad").string();
  const auto r = run_experiment(c);
  CHECK_FALSE(r.complete);
  CHECK(r.failed_stage == "discretize");
  CHECK(r.exit_code() == 2);
  const auto manifest = read_text((fs::path(c.output_directory) / "MANIFEST").string());
  CHECK(manifest.find("complete: false") != std::string::npos);
  CHECK(manifest.find("failed_stage: discretize") != std::string::npos);
}

TEST_CASE("run_experiment: constants pass and output is deterministic") {
  ExperimentConfig c;
  c.resolution = 128;
  c.j_max = 7;
  c.battery = {"const", "const:3"};
  c.epsilons = {0.5, 0.1};
  c.diagnostics_function = "const";
  c.diagnostics_level = 3;
  std::vector<std::string> files;
  std::vector<std::string> contents;
  for (int run = 0; run < 2; ++run) {
    c.output_directory = scratch("ok" + std::to_string(run)).string();
    const auto r = run_experiment(c);
    CHECK(r.complete);
    CHECK(r.failed_stage.empty());
    CHECK(r.exit_code() == 0);
    std::string blob;
    for (const auto& f : r.files) {
      CHECK(fs::exists(fs::path(c.output_directory) / f));
      blob += f + "\n" + read_text((fs::path(c.output_directory) / f).string());
    }
    const auto manifest = read_text((fs::path(c.output_directory) / "MANIFEST").string());
    for (const auto& f : r.files) CHECK(manifest.find("  " + f + "\n") != std::string::npos);
    contents.push_back(blob);
    files = r.files;
  }
  CHECK(contents[0] == contents[1]);
  for (const char* need : {"space.json", "cubes.json", "frame.json", "sampling.csv", "summary.json",
                           "diagnostics_E.csv"}) {
    CHECK(std::find(files.begin(), files.end(), need) != files.end());
  }
}
