#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  fs::create_directories(SSHCHAIN_TMP);
  const std::string err_path = std::string(SSHCHAIN_TMP) + "/stderr.txt";
  const std::string cmd = std::string(SSHCHAIN_CLI) + " " + args + " 2>" + err_path;
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp(const std::string& name) { return (fs::path(SSHCHAIN_TMP) / name).string(); }

void check_error(const Run& r, int code) {
  CHECK(r.code == code);
  CHECK(r.err.rfind("error:", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

}  // namespace

TEST_CASE("spectrum to stdout") {
  const Run r = run("spectrum --n 40 --v 0.3 --w 0.5 --z 0.0");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("index,label,energy\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 81);
  CHECK(r.out.find(",edge,") != std::string::npos);
  CHECK(r.out.find(",psi1,") != std::string::npos);
}

TEST_CASE("every subcommand runs") {
  for (const char* args : {"polarization --n 20 --no-timestamp", "schmidt --n 20 --state psi1",
                           "winding --v 0.2 --w 0.3 --z 0.4", "bands --band-points 11",
                           "sweep --n 10 --axis v:0:1:5 --observables K,P,gap,zeta_analytic",
                           "selftest"}) {
    CAPTURE(args);
    const Run r = run(args);
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK_FALSE(r.out.empty());
  }
  const Run w = run("winding --v 0.2 --w 0.3 --z 0.4");
  CHECK(w.out.find("analytic,ok,-1,") != std::string::npos);
  CHECK(w.out.find("numeric,ok,-1,") != std::string::npos);
}

TEST_CASE("sweep output is byte-identical across worker counts") {
  std::string first;
  for (int workers : {1, 4, 8}) {
    const std::string path = tmp("sweep_w" + std::to_string(workers) + ".csv");
    const Run r = run("sweep --n 20 --axis w/v:0:3:8 --axis z/v:0:3:8 --v 0.4 --no-timestamp "
                      "--observables K,P,zeta_numeric,bell --out " + path + " --workers " +
                      std::to_string(workers));
    REQUIRE(r.code == 0);
    const std::string body = slurp(path);
    if (first.empty()) first = body;
    CHECK(body == first);
  }
  for (int workers : {1, 4}) {
    const Run r = run("sweep --n 20 --axis v:0:1:16 --format json --no-timestamp --workers " +
                      std::to_string(workers));
    REQUIRE(r.code == 0);
    if (workers == 1) first = r.out;
    else CHECK(r.out == first);
  }
}

TEST_CASE("diagram writes one matrix per column") {
  const std::string stem = tmp("diag.csv");
  const Run r = run("diagram --n 12 --v 0.4 --axis w/v:0:3:5 --axis z/v:0:3:6 --out " + stem);
  REQUIRE(r.code == 0);
  const std::string k = slurp(tmp("diag_K_psi1.csv"));
  CHECK(k.rfind("w/v\\z/v,0,0.6,1.2,1.8,2.4,3\n", 0) == 0);
  CHECK(std::count(k.begin(), k.end(), '\n') == 6);
  CHECK(fs::exists(tmp("diag_P_psi1.csv")));
  check_error(run("diagram --n 12 --axis w/v:0:3:5 --axis z/v:0:3:6"), 1);
}

TEST_CASE("error paths: one line, prefixed, with the right exit code") {
  check_error(run("spectrum --precision 3"), 1);
  check_error(run("sweep --axis v:0:1:5 --v 0.2"), 1);
  check_error(run("spectrum --bogus"), 1);
  check_error(run(""), 1);
  check_error(run("spectrum --out /nonexistent_dir/x.csv"), 3);
  const Run conflict = run("sweep --axis v:0:1:5 --v 0.2");
  CHECK(conflict.err.find("conflict") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const Run r = run("--help");
  CHECK(r.code == 0);
  CHECK(r.out.find("spectrum") != std::string::npos);
}

TEST_CASE("timestamp can be disabled") {
  const Run with = run("winding --format json");
  const Run without = run("winding --format json --no-timestamp");
  CHECK(with.out.find("\"timestamp\"") != std::string::npos);
  CHECK(without.out.find("\"timestamp\"") == std::string::npos);
}
