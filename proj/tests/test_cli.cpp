#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("entropic_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const auto err_path = scratch() / "stderr.txt";
  const std::string cmd = std::string(ENTROPIC_CLI_PATH) + " " + args + " 2>" + err_path.string();
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

const char* kConfig = R"(
[density.g]
kind = gen_normal
n = 1
alpha = 2
v = 1

[density.u]
kind = uniform
a = 0
b = 1

[density.u_shift]
kind = uniform
a = 0.5
b = 1.5

[density.n0]
kind = normal
mu = 0
sigma = 1

[density.n1]
kind = normal
mu = 1
sigma = 1

[density.n5]
kind = normal
mu = 5
sigma = 1

[density.n01]
kind = normal
mu = 0.1
sigma = 1

[density.p]
kind = counterexample_p

[spec.s]
alpha = 2
v = 1
m = 2
n = 1

[spec.tight]
alpha = 2
v = 1
m = 1
n = 1

[spec.g]
alpha = 2
v = 1.2
m = 0.5
n = 1

[spec.wide]
alpha = 2
v = 30
m = 1
n = 1

[pair.uu]
x = u
y = u_shift

[pair.kl]
x = n1
y = n0

[pair.shift]
x = n0
y = n01
spec = g
tv = 0.0797552233534899

[pair.far]
x = n0
y = n5
spec = wide
)";

std::string config() {
  static const std::string path = write_config("run.ini", kConfig);
  return "--config " + path;
}

}  // namespace

TEST_CASE("entropy subcommand") {
  auto r = run(config() + " entropy g");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("1.418939", 0) == 0);
  r = run(config() + " entropy u");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("0.000000", 0) == 0);
  r = run(config() + " entropy p");
  CHECK(r.code == 3);
  CHECK(r.err.find("counterexample") != std::string::npos);
  r = run(config() + " --format json entropy g");
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["entropy"].get<double>() - 1.4189385332046727) < 1e-9);
  CHECK(j["error_estimate"].get<double>() <= 1e-9);
}

TEST_CASE("moment and sup subcommands") {
  auto r = run(config() + " moment u --alpha 2");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("0.333333", 0) == 0);
  r = run(config() + " moment p --alpha 1");
  CHECK(r.code == 3);
  r = run(config() + " sup g");
  CHECK(r.code == 0);
  CHECK(r.out.find("0.398942 (closed_form)") != std::string::npos);
}

TEST_CASE("tv and kl subcommands") {
  auto r = run(config() + " tv uu");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("1.000000", 0) == 0);
  r = run(config() + " tv shift");
  CHECK(r.code == 0);
  CHECK(r.out.find("continuity bound satisfied") != std::string::npos);
  r = run(config() + " tv far");
  CHECK(r.code == 2);
  CHECK(r.out.find("hypothesis violated") != std::string::npos);

  r = run(config() + " kl kl");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("0.500000", 0) == 0);
  r = run(config() + " kl uu");
  CHECK(r.code == 2);
}

TEST_CASE("check subcommand exit codes") {
  auto r = run(config() + " check u s");
  CHECK(r.code == 0);
  CHECK(r.out.find("member") != std::string::npos);
  CHECK(r.out.find("entropy bound satisfied") != std::string::npos);
  r = run(config() + " check p s");
  CHECK(r.code == 2);
  CHECK(r.out.find("non_member") != std::string::npos);
  r = run(config() + " check g tight");
  CHECK(r.code == 3);
  CHECK(r.out.find("inconclusive") != std::string::npos);
  r = run(config() + " check u 2,1,2,1");
  CHECK(r.code == 0);
}

TEST_CASE("constants subcommand") {
  auto r = run("constants 2,1,1,1");
  CHECK(r.code == 0);
  CHECK(r.out.find("c1 4.07236494292") != std::string::npos);
  CHECK(r.out.find("c2 2.5") != std::string::npos);
  CHECK(r.out.find("entropy_bound 2.4189385332") != std::string::npos);
  r = run("--format csv constants 2,1,1,1");
  CHECK(r.out.find("c2,2.5") != std::string::npos);
  r = run("constants 2,1,1");
  CHECK(r.code == 4);
}

TEST_CASE("verify subcommand") {
  const auto out = (scratch() / "theorem.json").string();
  auto r = run("verify theorem --format json --out " + out);
  CHECK(r.code == 0);
  CHECK(r.out.find("0 failed") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["failed"] == 0);
  CHECK(j["items"].size() > 40);

  r = run("verify proof");
  CHECK(r.code == 0);
  r = run("verify counterexamples");
  CHECK(r.code == 0);
  r = run("verify propagation");
  CHECK(r.code == 0);
  r = run("--seed 5 verify lemma2");
  CHECK(r.code == 0);
  CHECK(r.out.find("seed 5") != std::string::npos);
  r = run("verify everything");
  CHECK(r.code == 4);
}

TEST_CASE("verify exit codes from config matrices") {
  const std::string head = "[density.n0]\nkind = normal\nmu = 0\nsigma = 1\n"
                           "[density.n01]\nkind = normal\nmu = 0.1\nsigma = 1\n"
                           "[spec.g]\nalpha = 2\nv = 1.2\nm = 0.5\nn = 1\n";
  auto r = run("--config " + write_config("ok.ini", head + "[pair.s]\nx = n0\ny = n01\nspec = g\ntv = 0.0797552233534899\n") +
               " verify theorem");
  CHECK(r.code == 0);
  // A wrong closed-form distance is a failed item.
  r = run("--config " + write_config("bad.ini", head + "[pair.s]\nx = n0\ny = n01\nspec = g\ntv = 0.5\n") +
          " verify theorem");
  CHECK(r.code == 1);
  // Moment equal to v cannot be settled.
  r = run("--config " + write_config("tie.ini", "[density.n0]\nkind = normal\nmu = 0\nsigma = 1\n"
                                                "[spec.t]\nalpha = 2\nv = 1\nm = 1\nn = 1\n") +
          " verify theorem");
  CHECK(r.code == 3);
}

TEST_CASE("usage and config errors exit 4") {
  CHECK(run("").code == 4);
  CHECK(run("frobnicate").code == 4);
  CHECK(run(config() + " entropy nope").code == 4);
  CHECK(run("--format xml constants 2,1,1,1").code == 4);
  CHECK(run("--config /nonexistent.ini entropy g").code == 4);
  auto r = run("--config " + write_config("broken.ini", "[spec.s]\nalpha = -1\nv = 1\nm = 1\nn = 1\n") +
               " constants s");
  CHECK(r.code == 4);
  CHECK(r.err.find("alpha") != std::string::npos);
  r = run("--config " + write_config("syntax.ini", "[spec.s]\nalpha 1\n") + " constants s");
  CHECK(r.code == 4);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(run("--help").code == 0);
}

TEST_CASE("counterexample subcommand") {
  auto r = run("counterexample p --log 2.718281828459045");
  CHECK(r.code == 0);
  CHECK(r.out.find("1.52848223531") != std::string::npos);
  r = run("--format csv counterexample q");
  CHECK(r.code == 0);
  CHECK(r.out.find("-8.76014479") != std::string::npos);
  CHECK(run("counterexample r").code == 4);
}

TEST_CASE("identical config and seed give byte-identical CSV") {
  const std::string cfg = write_config("det.ini", std::string(kConfig) + "\n[options]\nseed = 11\n");
  const auto a = (scratch() / "a.csv").string();
  const auto b = (scratch() / "b.csv").string();
  // The matrix holds one moment tie, so the suite reports inconclusive.
  REQUIRE(run("--config " + cfg + " --format csv --out " + a + " verify theorem").code == 3);
  REQUIRE(run("--config " + cfg + " --format csv --out " + b + " verify theorem").code == 3);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).size() > 100);

  REQUIRE(run("--config " + cfg + " --format csv --out " + a + " verify lemma2").code == 0);
  REQUIRE(run("--config " + cfg + " --format csv --out " + b + " verify lemma2").code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("seed 11") != std::string::npos);
}
