#include <cmath>
#include <string>

#include "doctest.h"
#include "entropic/config.hpp"
#include "entropic/functionals.hpp"

using namespace entropic;

namespace {

std::string error_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config parses") {
  const auto cfg = parse_config(R"(
[density.g]
kind = gen_normal
n = 1
alpha = 2
v = 1

[spec.s]
alpha = 2
v = 1
m = 1
n = 1
)");
  REQUIRE(cfg.densities.size() == 1);
  CHECK(cfg.density("g").dimension() == 1);
  CHECK(cfg.spec("s") == ClassSpec(2, 1, 1, 1));
  CHECK(cfg.format == OutputFormat::text);
  CHECK_FALSE(cfg.tol.has_value());
}

TEST_CASE("every density kind and the options section") {
  const auto cfg = parse_config(R"(
# composed densities may be declared before their bases
[density.tri]
kind = convolve
first = u
second = u

[density.u]
kind = uniform
a = 0
b = 1

[density.n]
kind = normal
mu = 0.5
sigma = 2

[density.l]
kind = laplace
mu = 0
b = 1   # trailing comment

[density.p]
kind = counterexample_p

[density.q]
kind = counterexample_q

[density.half]
kind = scaled
base = u
c = 0.5

[density.n3]
kind = product
base = n
n = 3

[spec.t]
alpha = 2
v = 4
m = 2
n = 3

[pair.un]
x = u
y = n

[pair.nn]
x = n3
y = n3
spec = t

[options]
tol = 1e-8
format = csv
out = r.csv
seed = 42
samples = 100
)");
  CHECK(cfg.density_order.size() == 8);
  CHECK(cfg.density_order.front() == "tri");
  CHECK(cfg.density("n3").dimension() == 3);
  CHECK(std::abs(differential_entropy(cfg.density("half")).value + std::log(2.0)) < 1e-12);
  CHECK(cfg.pairs.size() == 2);
  CHECK(cfg.pair("nn").spec == std::optional<std::string>("t"));
  CHECK_FALSE(cfg.pair("un").spec.has_value());
  CHECK(cfg.tol == 1e-8);
  CHECK(cfg.format == OutputFormat::csv);
  CHECK(cfg.out == std::optional<std::string>("r.csv"));
  CHECK(cfg.seed == 42);
  CHECK(cfg.samples == 100);
  CHECK_THROWS_AS((void)cfg.density("missing"), ConfigError);
  CHECK_THROWS_AS((void)cfg.pair("missing"), ConfigError);
}

TEST_CASE("range errors name the field") {
  const auto msg = error_of("[spec.s]\nalpha = -1\nv = 1\nm = 1\nn = 1\n");
  CHECK(msg.find("alpha") != std::string::npos);
  CHECK(error_of("[spec.s]\nalpha = 1\nv = 0\nm = 1\nn = 1\n").find("'v'") != std::string::npos);
  CHECK(error_of("[spec.s]\nalpha = 1\nv = 1\nm = 1\nn = 0\n").find("'n'") != std::string::npos);
  CHECK(error_of("[density.x]\nkind = normal\nmu = 0\nsigma = -2\n").find("sigma") != std::string::npos);
  CHECK(error_of("[density.x]\nkind = uniform\na = 1\nb = 0\n").find("'b'") != std::string::npos);
  CHECK(error_of("[spec.s]\nalpha = 1\nv = 1\nm = 1\n").find("missing field 'n'") != std::string::npos);
}

TEST_CASE("syntax errors carry the line number") {
  CHECK(error_of("[density.x]\nkind = normal\nmu 0\n").find("line 3") != std::string::npos);
  CHECK(error_of("[density.x\n").find("line 1") != std::string::npos);
  CHECK(error_of("\n\n[bogus.x]\n").find("line 3") != std::string::npos);
  CHECK(error_of("a = 1\n").find("line 1") != std::string::npos);
  CHECK(error_of("[density.x]\nkind = cauchy\n").find("line 2") != std::string::npos);
  CHECK(error_of("[density.x]\nkind = uniform\na = zero\nb = 1\n").find("line 3") != std::string::npos);
  CHECK(error_of("[density.x]\nkind = uniform\na = 0\nb = 1\ncolour = red\n").find("line 5") != std::string::npos);
  CHECK(error_of("[spec.s]\n[spec.s]\n").find("line 2") != std::string::npos);
  CHECK(error_of("[spec.s]\nalpha = 1\nalpha = 2\n").find("line 3") != std::string::npos);
}

TEST_CASE("pairs are validated") {
  const std::string base = R"(
[density.a]
kind = normal
mu = 0
sigma = 1

[density.b]
kind = gen_normal
n = 2
alpha = 2
v = 2

[spec.s2]
alpha = 2
v = 4
m = 2
n = 2
)";
  CHECK(error_of(base + "[pair.p]\nx = a\ny = b\n").find("dimension") != std::string::npos);
  CHECK(error_of(base + "[pair.p]\nx = a\ny = zzz\n").find("zzz") != std::string::npos);
  CHECK(error_of(base + "[pair.p]\nx = a\ny = a\nspec = s2\n").find("spec") != std::string::npos);
  CHECK(error_of(base + "[pair.p]\nx = b\ny = b\nspec = nope\n").find("nope") != std::string::npos);
  CHECK(error_of(base + "[pair.p]\nx = b\ny = b\nspec = s2\n").empty());
}

TEST_CASE("density references are resolved and cycles rejected") {
  CHECK(error_of("[density.a]\nkind = scaled\nbase = a\nc = 2\n").find("itself") != std::string::npos);
  CHECK(error_of("[density.a]\nkind = scaled\nbase = b\nc = 2\n").find("'b'") != std::string::npos);
  CHECK(error_of("[density.g]\nkind = gen_normal\nn = 2\nalpha = 2\nv = 1\n[density.p]\nkind = product\nbase = g\nn = 2\n")
            .find("one-dimensional") != std::string::npos);
}

TEST_CASE("options are validated") {
  CHECK(error_of("[options]\nformat = xml\n").find("format") != std::string::npos);
  CHECK(error_of("[options]\ntol = -1\n").find("tol") != std::string::npos);
  CHECK(error_of("[options]\nseed = -3\n").find("line 2") != std::string::npos);
  CHECK_THROWS_AS((void)load_config("/nonexistent/run.ini"), ConfigError);
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK_THROWS_AS((void)parse_format("yaml"), ConfigError);
}
