#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "eulercs/imaging.hpp"
#include "eulercs/random.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// One directory per test, so ctest can run them side by side.
const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d =
        fs::current_path() / "cli_scratch" / ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_in(const std::string& name) { return (workdir() / name).string(); }

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(const std::string& args) {
  static int counter = 0;
  const std::string out = path_in("stdout" + std::to_string(counter));
  const std::string err = path_in("stderr" + std::to_string(counter));
  ++counter;
  const std::string cmd = std::string(EULERCS_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream o(out), e(err);
  std::stringstream so, se;
  so << o.rdbuf();
  se << e.rdbuf();
  r.out = so.str();
  r.err = se.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, VersionAndUsage) {
  const Result v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("1.0.0"), std::string::npos);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("gen").code, 2);
  EXPECT_EQ(run("gen --index 11,5 --rows 8").code, 2);
  EXPECT_EQ(run("gen --index 11").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, GenVerifyRoundTrip) {
  for (const std::string sel : {"--index 11,5", "--index 12,2", "--rows 12", "--extend 12", "--ternary 5,1,1"}) {
    const std::string file = path_in("m.esm");
    const Result g = run("gen " + sel + " --out " + file);
    ASSERT_EQ(g.code, 0) << sel << g.err;
    const Result v = run("verify " + file);
    EXPECT_EQ(v.code, 0) << sel << v.out << v.err;
    const json j = json::parse(v.out);
    EXPECT_TRUE(j["ok"].get<bool>()) << sel;
    EXPECT_TRUE(fs::exists(file + ".manifest.json"));
  }
}

TEST(Cli, GenReportsInfeasibleIndices) {
  EXPECT_EQ(run("gen --rows 7").code, 3);
  EXPECT_EQ(run("gen --rows 49").code, 3);
  EXPECT_EQ(run("gen --index 6,2").code, 3);
  EXPECT_EQ(run("gen --extend 16").code, 3);
  const Result r = run("gen --rows 7");
  EXPECT_NE(r.err.find("prime"), std::string::npos) << r.err;
}

TEST(Cli, GenWritesCsvAndStdout) {
  const Result r = run("gen --index 3,2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("ESM v1 rows=6 cols=9", 0), 0u);
  const Result c = run("gen --index 3,2 --format csv");
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(c.out.substr(0, c.out.find('\n')), "1,0,0,0,0,1,0,1,0");
}

TEST(Cli, VerifyCatchesCorruption) {
  const std::string file = path_in("bad.esm");
  ASSERT_EQ(run("gen --index 11,5 --out " + file).code, 0);
  std::string text = slurp(file);
  // Move the first column's first one into another column's row set.
  const std::size_t first_col = text.find('\n', text.find('\n') + 1) + 1;
  text.replace(first_col, 1, "2");
  std::ofstream(file, std::ios::binary) << text;
  const Result v = run("verify " + file);
  EXPECT_EQ(v.code, 1) << v.out;
  EXPECT_FALSE(json::parse(v.out)["ok"].get<bool>());
  std::ofstream(path_in("junk.esm")) << "not a matrix\n";
  EXPECT_EQ(run("verify " + path_in("junk.esm")).code, 1);
}

TEST(Cli, ManifestsAreByteStable) {
  const std::string a = path_in("a.esm");
  ASSERT_EQ(run("gen --index 7,3 --out " + a).code, 0);
  const std::string first = slurp(a + ".manifest.json");
  ASSERT_EQ(run("gen --index 7,3 --out " + a).code, 0);
  EXPECT_EQ(slurp(a + ".manifest.json"), first);
  const json m = json::parse(first);
  EXPECT_EQ(m["subcommand"], "gen");
  EXPECT_EQ(m["flags"]["index"], "7,3");
  EXPECT_FALSE(m.contains("wall_clock_s"));
  ASSERT_EQ(run("--timing gen --index 7,3 --out " + a).code, 0);
  EXPECT_TRUE(json::parse(slurp(a + ".manifest.json")).contains("wall_clock_s"));
}

TEST(Cli, BenchSweepIsDeterministic) {
  const std::string p1 = path_in("sweep1");
  const std::string p2 = path_in("sweep2");
  ASSERT_EQ(run("bench sweep --index 11,5 --kmax 4 --trials 30 --seed 5 --out " + p1).code, 0);
  ASSERT_EQ(run("bench sweep --index 11,5 --kmax 4 --trials 30 --seed 5 --out " + p2).code, 0);
  EXPECT_EQ(slurp(p1 + ".json"), slurp(p2 + ".json"));
  EXPECT_EQ(slurp(p1 + ".csv"), slurp(p2 + ".csv"));
  const json j = json::parse(slurp(p1 + ".json"));
  ASSERT_EQ(j["points"].size(), 4u);
  EXPECT_EQ(j["points"][0]["percent"].get<double>(), 100.0);
  EXPECT_EQ(run("bench sweep --index 11,5 --kmin 200").code, 2);
}

TEST(Cli, RecoverGeneratedSignal) {
  const Result r = run("recover --index 11,5 --sparsity 2 --seed 3");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_GE(j["result"]["snr_db"].get<double>(), 100.0) << r.out;
  EXPECT_EQ(run("recover --index 11,5").code, 2);
}

TEST(Cli, CbirIndexQueryScore) {
  // Two classes of 32x32 images: smooth ramps and noise.
  std::ofstream list(path_in("list.txt"));
  list << "# id class path\n";
  eulercs::Rng rng(17);
  for (int i = 0; i < 4; ++i) {
    eulercs::Image ramp(32, 32), noise(32, 32);
    for (std::size_t r = 0; r < 32; ++r) {
      for (std::size_t c = 0; c < 32; ++c) {
        ramp.at(r, c) = static_cast<double>(4 * c + 2 * r * i) + std::floor(rng.uniform() * 20.0);
        noise.at(r, c) = std::floor(rng.uniform() * 256.0);
      }
    }
    eulercs::save_pgm(path_in("ramp" + std::to_string(i) + ".pgm"), ramp);
    eulercs::save_pgm(path_in("noise" + std::to_string(i) + ".pgm"), noise);
    list << "ramp" << i << " ramp ramp" << i << ".pgm\n";
    list << "noise" << i << " noise noise" << i << ".pgm\n";
  }
  list.close();
  const std::string db = path_in("db");
  const Result ix = run("cbir index --list " + path_in("list.txt") + " --index 16,4 --patch 16 --out " + db);
  ASSERT_EQ(ix.code, 0) << ix.err;
  const std::string results = path_in("results.json");
  const Result q = run("cbir query --db " + db + " --list " + path_in("list.txt") + " --top 1 --out " + results);
  ASSERT_EQ(q.code, 0) << q.err;
  const json qj = json::parse(slurp(results));
  ASSERT_EQ(qj["queries"].size(), 8u);
  for (const auto& e : qj["queries"]) EXPECT_EQ(e["hits"][0]["id"], e["query"]);
  const Result s = run("cbir score --results " + results + " --db " + db + " --top 1");
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(json::parse(s.out)["precision"].get<double>(), 1.0);
}
