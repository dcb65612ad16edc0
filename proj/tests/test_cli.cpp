// End-to-end checks through the installed binary: the test runner receives
// the binary path as its first argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_binary;
std::filesystem::path g_work;

int run_cmd(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = g_binary + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string constant_config(const std::filesystem::path& out_dir) {
  return
      "[domain]\n"
      "kind = disk\n"
      "radius = 1.0\n"
      "n = 64\n"
      "[run]\n"
      "dt = 0.01\n"
      "t_end = 0.5\n"
      "cadence = 5\n"
      "[initial]\n"
      "datum = constants\n"
      "u_const = 2.0\n"
      "v_const = 2.0\n"
      "[output]\n"
      "dir = " + out_dir.string() + "\n";
}

}  // namespace

TEST_CASE("check-motility prints the assumption verdicts") {
  const auto log = g_work / "check.log";
  CHECK(run_cmd("check-motility exp-decay", log) == 0);
  const std::string out = slurp(log);
  CHECK(out.find("A0 ✓") != std::string::npos);
  CHECK(out.find("A3 ✗") != std::string::npos);

  CHECK(run_cmd("check-motility no-such-family", log) == 1);
}

TEST_CASE("run, determinism, and verify") {
  const auto dir_a = g_work / "run_a";
  const auto cfg_a = g_work / "a.ini";
  spit(cfg_a, constant_config(dir_a));
  const auto log = g_work / "run.log";

  // the same config run twice produces bit-identical outputs
  REQUIRE(run_cmd("run " + cfg_a.string(), log) == 0);
  const std::string diag_first = slurp(dir_a / "diagnostics.csv");
  const std::string jsonl_first = slurp(dir_a / "diagnostics.jsonl");
  REQUIRE(run_cmd("run " + cfg_a.string(), log) == 0);
  const std::string diag_a = slurp(dir_a / "diagnostics.csv");
  CHECK(diag_a == diag_first);
  CHECK(!diag_a.empty());
  CHECK(slurp(dir_a / "diagnostics.jsonl") == jsonl_first);

  CHECK(run_cmd("verify " + dir_a.string(), log) == 0);

  // tamper with the mass column of the first record: verify must fail with 2
  // (line 0 is the hash comment, line 1 the header, line 2 the first record)
  std::istringstream in(diag_a);
  std::string line, tampered;
  for (int i = 0; std::getline(in, line); ++i) {
    if (i == 2) {
      const auto c1 = line.find(',');
      REQUIRE(c1 != std::string::npos);
      line.insert(c1 + 1, "9");  // prepend a digit to the mass value
    }
    tampered += line + "\n";
  }
  spit(dir_a / "diagnostics.csv", tampered);
  CHECK(run_cmd("verify " + dir_a.string(), log) == 2);

  // missing directory is also a verification failure
  CHECK(run_cmd("verify " + (g_work / "no_such_dir").string(), log) == 2);
}

TEST_CASE("solver failures exit with 1") {
  const auto log = g_work / "bad.log";
  CHECK(run_cmd("run " + (g_work / "missing.ini").string(), log) == 1);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <motisim-binary>\n");
    return 1;
  }
  g_binary = argv[1];
  g_work = std::filesystem::temp_directory_path() / "motisim_cli_test";
  std::filesystem::remove_all(g_work);
  std::filesystem::create_directories(g_work);
  unsetenv("MOTISIM_OUT");

  doctest::Context ctx;
  ctx.applyCommandLine(1, argv);
  const int rc = ctx.run();
  std::filesystem::remove_all(g_work);
  return rc;
}
