#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "augkit/image_io.hpp"
#include "augkit/manifest.hpp"
#include "cli.hpp"
#include "helpers.hpp"

using namespace augkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tiny_folder(const fs::path& dir) {
  fs::create_directories(dir);
  for (int i = 0; i < 3; ++i) {
    write_file(dir / ("p" + std::to_string(i) + ".png"), encode_png(testutil::noise(32, 32, 70 + i)));
  }
  return dir;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"augment", "--out", "x"}).code == cli::kExitUsage);
  CHECK(run({"spaces", "--name", "bogus"}).code == cli::kExitUsage);
  CHECK(run({"augment", "--input", "x", "--out", "y", "--policy", "ta", "--ra-n", "2"}).code == cli::kExitUsage);
  CHECK(run({"augment", "--input", "x", "--out", "y", "--policy", "ta", "--ra-m", "5"}).code == cli::kExitUsage);
  CHECK(run({"augment", "--input", "x", "--out", "y", "--policy", "ra", "--strengths", "0,30"}).code ==
        cli::kExitUsage);
  CHECK(run({"augment", "--input", "x", "--out", "y", "--space", "ohl", "--strengths", "7"}).code ==
        cli::kExitUsage);
  CHECK(run({"augment", "--input", "x", "--out", "y", "--ops", "nope"}).code == cli::kExitUsage);
  CHECK(run({"selfcheck", "--draws", "10"}).code == cli::kExitUsage);
  CHECK(run({"ci", "--values", "1"}).code == cli::kExitUsage);
  CHECK(run({"bench", "--duration", "0.5"}).code == cli::kExitUsage);
}

TEST_CASE("help exits with 0") {
  const auto r = run({"--help"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("augment") != std::string::npos);
  CHECK(run({"augment", "--help"}).code == cli::kExitOk);
}

TEST_CASE("spaces listing and dump") {
  const auto list = Json::parse(run({"spaces"}).out);
  CHECK(list["spaces"].size() == 7);
  const auto r = run({"spaces", "--name", "full"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["ops"].size() == 21);
  CHECK(Json::parse(run({"spaces", "--name", "ra"}).out)["ops"].size() == 14);
  CHECK(Json::parse(run({"spaces", "--name", "ohl"}).out)["levels"].size() == 3);
}

TEST_CASE("ci prints JSON") {
  const auto r = run({"ci", "--values", "0,1"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["mean"].get<double>() == doctest::Approx(0.5));
  CHECK(std::fabs(j["halfwidth"].get<double>() - 6.353) < 1e-3);
  CHECK(j["n"] == 2);
}

TEST_CASE("selfcheck passes and catches a reversed strength mapping") {
  const auto ok = run({"selfcheck", "--draws", "100000"});
  CHECK(ok.code == cli::kExitOk);
  CHECK(Json::parse(ok.out)["passed"] == true);
  const auto bad = run({"selfcheck", "--draws", "100000", "--fault", "monotonicity"});
  CHECK(bad.code == cli::kExitFailure);
  CHECK(bad.err.find("strength_monotonicity") != std::string::npos);
}

TEST_CASE("augment, seed fallback and replay") {
  testutil::TempDir tmp;
  const fs::path input = tiny_folder(tmp.path() / "in");
  const std::string a = (tmp.path() / "a").string(), b = (tmp.path() / "b").string();
  const auto r = run({"augment", "--input", input.string(), "--out", a, "--space", "aa", "--replicas", "2",
                      "--seed", "9", "--chain", "svhn", "--workers", "2"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["outputs"] == 6);

  ::setenv("AUG_SEED", "9", 1);
  CHECK(run({"augment", "--input", input.string(), "--out", b, "--space", "aa", "--replicas", "2",
             "--chain", "svhn"})
            .code == 0);
  ::setenv("AUG_SEED", "nine", 1);
  CHECK(run({"augment", "--input", input.string(), "--out", b}).code == cli::kExitUsage);
  ::unsetenv("AUG_SEED");
  CHECK(read_file(fs::path(a) / "1_1.png") == read_file(fs::path(b) / "1_1.png"));
  CHECK(read_file(fs::path(a) / kManifestName) != std::vector<std::uint8_t>{});

  const auto replay = run({"replay", "--manifest", (fs::path(a) / kManifestName).string()});
  CHECK(replay.code == 0);
  CHECK(Json::parse(replay.out)["matched"] == 6);

  write_file(fs::path(a) / "2_0.png", encode_png(testutil::noise(32, 32, 1)));
  const auto broken = run({"replay", "--manifest", (fs::path(a) / kManifestName).string()});
  CHECK(broken.code == cli::kExitFailure);
  CHECK(broken.err.find("2_0.png") != std::string::npos);
}

TEST_CASE("strength subsets reach the manifest") {
  testutil::TempDir tmp;
  const fs::path input = tiny_folder(tmp.path() / "in");
  const fs::path out = tmp.path() / "out";
  const auto r = run({"augment", "--input", input.string(), "--out", out.string(), "--space", "ra", "--policy", "ua",
                      "--strengths", "0,15,30", "--replicas", "20", "--seed", "7"});
  REQUIRE(r.code == 0);
  std::ifstream in(out / kManifestName);
  std::set<int> seen;
  for (std::string line; std::getline(in, line);) {
    const Json j = Json::parse(line);
    if (j["type"] != "record") continue;
    for (const auto& op : j["ops"]) seen.insert(op["m"].get<int>());
  }
  CHECK_FALSE(seen.empty());
  for (int m : seen) CHECK((m == 0 || m == 15 || m == 30));
}

TEST_CASE("stdout is a pure function of flags and seed") {
  testutil::TempDir tmp;
  const fs::path input = tiny_folder(tmp.path() / "in");
  const auto a = run({"augment", "--input", input.string(), "--out", (tmp.path() / "o").string(), "--seed", "3"});
  const auto b = run({"augment", "--input", input.string(), "--out", (tmp.path() / "o").string(), "--seed", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("an empty manifest replays to nothing") {
  testutil::TempDir tmp;
  write_file(tmp.path() / kManifestName, std::vector<std::uint8_t>{});
  const auto r = run({"replay", "--manifest", (tmp.path() / kManifestName).string()});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["records"] == 0);
}

TEST_CASE("runtime failures exit with 1") {
  testutil::TempDir tmp;
  CHECK(run({"augment", "--input", "/nonexistent/dir", "--out", (tmp.path() / "o").string()}).code ==
        cli::kExitFailure);
  CHECK(fs::exists(tmp.path() / "o" / kIncompleteMarker));
  CHECK(run({"replay", "--manifest", "/nonexistent/manifest.jsonl"}).code == cli::kExitFailure);
}

TEST_CASE("bench reports throughput") {
  const auto r = run({"bench", "--duration", "1", "--size", "16"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["aggregate"].get<double>() > 0);
  CHECK(j["per_worker"].size() == 1);
}
