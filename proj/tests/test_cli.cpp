#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

struct CmdResult {
  int exit_code;
  std::string output;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(GCONV_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("kernel subcommand emits the exact law") {
  const CmdResult r = run_cli("kernel --conv pstable:p=2 --x 3 --y 4");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "point,weight\n5,1\n");
}

TEST_CASE("gcf subcommand tabulates the kernel of a point mass") {
  const CmdResult r = run_cli("gcf --conv kendall:a=1 --measure dirac:1 --tmax 2 --steps 4");
  CHECK(r.exit_code == 0);
  CHECK(r.output ==
        "t,phi,stderr\n"
        "0,1,0\n"
        "0.5,0.5,0\n"
        "1,0,0\n"
        "1.5,0,0\n"
        "2,0,0\n");
}

TEST_CASE("verify runs are byte-identical for a fixed seed") {
  const CmdResult a = run_cli("verify --suite kernels --seed 7");
  const CmdResult b = run_cli("verify --suite kernels --seed 7");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.find("acc01_kernel_exactness") != std::string::npos);
}

TEST_CASE("deterministic sampling output") {
  const CmdResult a = run_cli("stable --conv max --p 1 --samples 50 --seed 3");
  const CmdResult b = run_cli("stable --conv max --p 1 --samples 50 --seed 3");
  const CmdResult c = run_cli("stable --conv max --p 1 --samples 50 --seed 4");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output != c.output);
  CHECK(a.output.substr(0, 2) == "x\n");
}

TEST_CASE("levy-path long format carries a path id") {
  const CmdResult r = run_cli(
      "levy-path --conv kendall:a=1 --family stable:p=1 --tmax 1 --steps 2 --paths 2 --seed 5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("path_id,t,state\n0,0,0\n", 0) == 0);
  CHECK(r.output.find("\n1,0,0\n") != std::string::npos);
}

TEST_CASE("weak-poisson output columns") {
  const CmdResult r = run_cli("weak-poisson --law sphere:n=3 --c 1 --tmax 1 --steps 2 --seed 5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("t,S,Y1,Y2,Y3\n0,0,0,0,0\n", 0) == 0);
}

TEST_CASE("integrate cf grid") {
  const CmdResult r = run_cli(
      "integrate --law sas:p=2 --f \"1@[0,1);0@[1,2)\" --cf --A 1 --tmax 1 --steps 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("t,phi\n0,1\n", 0) == 0);
}

TEST_CASE("json format") {
  const CmdResult r =
      run_cli("kernel --conv symmetric:a=1 --x 1 --y 1 --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"atoms\"") != std::string::npos);
  CHECK(r.output.find("\"weight\":0.5") != std::string::npos);
}

TEST_CASE("usage errors exit with 2 and say why") {
  CHECK(run_cli("kernel --conv nosuch:a=1 --x 1 --y 1").exit_code == 2);
  CHECK(run_cli("kernel --conv classic --x 1 --y 1 --bogus-flag").exit_code == 2);
  CHECK(run_cli("gcf --conv classic --measure dirac:1 --nonsense").exit_code == 2);
  const CmdResult r = run_cli("cpoisson --conv kingman:s=0.5 --a 1 --measure");
  CHECK(r.exit_code == 1);  // unsupported closed form reports gracefully
  CHECK(r.output.find("fall back") != std::string::npos);
}

TEST_CASE("levy-path with compound Poisson increments") {
  const CmdResult r = run_cli(
      "levy-path --conv classic --family cpoisson:a=1,jump=1 --tmax 1 --steps 4 --seed 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("t,state\n0,0\n", 0) == 0);
}

TEST_CASE("weak-poisson rejects generators without a pair construction") {
  const CmdResult r = run_cli("weak-poisson --law kendallmu:a=1 --c 1 --tmax 1 --steps 2");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("pair") != std::string::npos);
}

TEST_CASE("help exists for every subcommand") {
  for (const char* sub : {"kernel", "gcf", "stable", "cpoisson", "levy-path", "weak-poisson",
                          "integrate", "verify"}) {
    const CmdResult r = run_cli(std::string(sub) + " --help");
    CHECK(r.exit_code == 0);
    CHECK(!r.output.empty());
  }
}
