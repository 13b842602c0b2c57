#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "grushin/config.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
  std::string err;
};

fs::path scratch()
{
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("grushin_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p)
{
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Result run(const std::string& args, const std::string& env = "")
{
  static int counter = 0;
  const fs::path out = scratch() / ("stdout_" + std::to_string(counter));
  const fs::path err = scratch() / ("stderr_" + std::to_string(counter++));
  const std::string cmd = env + " " + GRUSHIN_CLI_PATH + std::string(" ") + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  Result r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string out_dir(const std::string& name) { return (scratch() / name).string(); }

grushin::Config manifest(const std::string& dir) { return grushin::load_config(dir + "/manifest.txt"); }

} // namespace

TEST_CASE("missing d1 is reported by name")
{
  const Result r = run("grid d2=1 --out " + out_dir("missing"));
  CHECK(r.status == 2);
  CHECK(r.err.find("'d1'") != std::string::npos);
}

TEST_CASE("malformed values name their key")
{
  const Result r = run("riesz d1=1 d2=1 alpha=abc --out " + out_dir("malformed"));
  CHECK(r.status == 2);
  CHECK(r.err.find("'alpha'") != std::string::npos);
}

TEST_CASE("unknown suite lists the available ones")
{
  const Result r = run("verify suite=nonesuch --out " + out_dir("unknown"));
  CHECK(r.status == 2);
  for (const char* s : {"core", "eigen", "kernel", "plancherel", "decay"})
    CHECK(r.err.find(s) != std::string::npos);
}

TEST_CASE("grid writes hashed CSV and a manifest")
{
  const std::string d = out_dir("grid");
  const Result r = run("grid d1=1 d2=1 --out " + d);
  REQUIRE(r.status == 0);
  const grushin::Config m = manifest(d);
  CHECK(m.at("command") == "grid");
  CHECK(m.at("grid.x1_count") == "64");
  const std::string csv = slurp(d + "/grid.csv");
  CHECK(csv.rfind("# config_hash=" + m.at("config_hash") + "\n", 0) == 0);
}

TEST_CASE("riesz records the separated-versus-direct deviation")
{
  const std::string d = out_dir("riesz");
  const Result r = run("riesz d1=1 d2=1 family=hermite-bump alpha=1 j=3 --out " + d);
  REQUIRE(r.status == 0);
  const grushin::Config m = manifest(d);
  CHECK(m.at("result.deviation_ok") == "true");
  CHECK(grushin::get_double(m, "result.deviation") <= 1e-6);
  CHECK(fs::exists(d + "/riesz_direct.bin"));
  CHECK(fs::exists(d + "/riesz_separated.csv"));
}

TEST_CASE("replaying a manifest reproduces every output bit for bit")
{
  const std::string a = out_dir("replay_a"), b = out_dir("replay_b");
  REQUIRE(run("riesz d1=1 d2=1 alpha=2 j=3 seed=4 --out " + a).status == 0);
  REQUIRE(run("replay manifest=" + a + "/manifest.txt --out " + b).status == 0);
  const grushin::Config ma = manifest(a), mb = manifest(b);
  CHECK(ma.at("config_hash") == mb.at("config_hash"));
  CHECK(ma.at("output.0") == mb.at("output.0"));
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    if (name == "manifest.txt")
      continue;
    CHECK(slurp(entry.path()) == slurp(fs::path(b) / name));
    ++compared;
  }
  CHECK(compared > 0);
}

TEST_CASE("worker count does not change results or the hash")
{
  const std::string a = out_dir("workers_1"), b = out_dir("workers_2");
  REQUIRE(run("field d1=1 d2=1 workers=1 --out " + a).status == 0);
  REQUIRE(run("field d1=1 d2=1 --out " + b, "GRUSHIN_WORKERS=2").status == 0);
  CHECK(manifest(a).at("config_hash") == manifest(b).at("config_hash"));
  CHECK(manifest(b).at("workers") == "2");
  CHECK(slurp(a + "/field.bin") == slurp(b + "/field.bin"));
  CHECK(slurp(a + "/field.csv") == slurp(b + "/field.csv"));
}

TEST_CASE("core suite passes and the exit status reflects it")
{
  const std::string d = out_dir("core");
  const Result r = run("verify suite=core d1=1 d2=1 --out " + d);
  CHECK(r.status == 0);
  const std::string v = slurp(d + "/verdicts.csv");
  CHECK(v.find("aggregate,PASS") != std::string::npos);
  CHECK(v.find("FAIL") == std::string::npos);
}

TEST_CASE("decay suite below threshold is a no-guarantee success")
{
  const std::string d = out_dir("decay");
  const Result r = run("verify suite=decay d1=1 d2=1 p1=1 p2=inf alpha=1 j_lo=1 j_hi=2 --out " + d);
  CHECK(r.status == 0);
  CHECK(r.out.find("NO-GUARANTEE") != std::string::npos);
}

TEST_CASE("threshold table at resolution 2")
{
  const std::string d = out_dir("thresholds");
  REQUIRE(run("thresholds d1=1 d2=1 resolution=2 --out " + d).status == 0);
  std::istringstream in(slurp(d + "/thresholds.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line.rfind("inv_p1", 0) != 0)
      ++rows;
  CHECK(rows == 9);
  CHECK(run("thresholds d1=1 d2=1 resolution=1 --out " + d).status == 2);
}

TEST_CASE("config files and overrides combine")
{
  const std::string d = out_dir("config");
  {
    std::ofstream f(scratch() / "run.cfg");
    f << "# comment\nd1=1\nd2=1\nx1_count=32\n";
  }
  REQUIRE(run("grid --config " + (scratch() / "run.cfg").string() + " x1_count=16 --out " + d).status == 0);
  CHECK(manifest(d).at("grid.x1_count") == "16");
}
