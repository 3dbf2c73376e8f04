#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "entropic/verify.hpp"
#include "json.hpp"

using namespace entropic;
using std::numbers::e;

namespace {

std::size_t count_kind(const VerificationReport& r, const std::string& kind) {
  std::size_t n = 0;
  for (const auto& it : r.items) n += it.kind == kind;
  return n;
}

}  // namespace

TEST_CASE("default theorem suite has no failures") {
  const auto m = default_theorem_matrix();
  CHECK(m.densities.size() >= 12);
  CHECK(m.specs.size() >= 3);
  CHECK(m.pairs.size() >= 10);

  const auto r = run_theorem_suite(m);
  CHECK(r.failed == 0);
  CHECK(r.inconclusive == 0);
  CHECK(r.passed + r.failed + r.inconclusive + r.skipped == r.items.size());

  std::size_t entropy_pass = 0;
  std::size_t pair_pass = 0;
  bool boundary = false;
  bool rejected = false;
  bool divergent = false;
  for (const auto& it : r.items) {
    CAPTURE(it.id);
    if (it.kind == "entropy_bound" && it.verdict == Verdict::pass) ++entropy_pass;
    if (it.kind == "continuity_bound" && it.verdict == Verdict::pass) ++pair_pass;
    if (it.id == "uniform-shift-boundary") {
      boundary = it.verdict == Verdict::pass && it.delta && std::abs(*it.delta - 1.0) < 1e-12;
    }
    if (it.id == "gauss-shift-5-rejected") {
      rejected = it.verdict == Verdict::skipped && it.reason.find("hypothesis violated") != std::string::npos;
    }
    if (it.id.rfind("counterexample_p", 0) == 0) {
      divergent = it.verdict == Verdict::skipped && it.reason.find("moment divergent") != std::string::npos;
    }
  }
  CHECK(entropy_pass >= 30);
  CHECK(pair_pass >= 10);
  CHECK(boundary);
  CHECK(rejected);
  CHECK(divergent);
}

TEST_CASE("theorem suite with nothing in class skips everything") {
  TheoremMatrix m;
  m.densities = {counterexample_p(), uniform(0, 1)};
  m.specs = {ClassSpec(2, 1, 1, 1)};
  const auto r = run_theorem_suite(m);
  CHECK(r.items.size() == 2);
  CHECK(r.skipped == 2);
  CHECK(r.passed == 0);
  CHECK(r.failed == 0);
}

TEST_CASE("theorem suite flags a wrong L1 oracle") {
  TheoremMatrix m;
  m.pairs = {{"bad-oracle", normal(0, 1), normal(0.1, 1), ClassSpec(2, 1.2, 0.5, 1), 0.2}};
  const auto r = run_theorem_suite(m);
  REQUIRE(r.items.size() == 1);
  CHECK(r.items[0].verdict == Verdict::fail);
}

TEST_CASE("divergence sweep for p follows the closed form") {
  CHECK(counterexample_p_truncated_entropy(std::exp(e)) == doctest::Approx(1.52848223531423).epsilon(1e-13));
  CHECK(counterexample_p_truncated_entropy(e) == 0.0);
  const auto rows = divergence_sweep_p({e, std::exp(e), std::exp(10.0), std::exp(100.0)});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].value == 0.0);
  CHECK(std::abs(rows[1].value - 1.52848223531423) < 1e-9);
  for (const auto& row : rows) {
    CHECK(row.converged);
    CHECK(std::abs(row.value - *row.closed_form) < 1e-6);
  }
  CHECK(rows[3].value > rows[2].value);
  CHECK_THROWS_AS((void)divergence_sweep_p({std::exp(701.0)}), std::invalid_argument);
}

TEST_CASE("divergence sweep for q matches high-precision values") {
  const auto rows = divergence_sweep_q({std::exp(-e), std::exp(-std::exp(2.0)), std::exp(-std::exp(3.0)),
                                        std::exp(-std::exp(4.0)), std::exp(-std::exp(5.0))});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].value == 0.0);
  const double oracle[] = {-1.0828703186, -2.3622801788, -4.6113537933, -8.7601447999};
  for (int i = 0; i < 4; ++i) {
    CHECK(rows[i + 1].converged);
    CHECK(std::isfinite(rows[i + 1].value));
    CHECK(std::abs(rows[i + 1].value - oracle[i]) < 1e-8);
    CHECK(rows[i + 1].value < rows[i].value);
  }
  CHECK_THROWS_AS((void)divergence_sweep_q({std::exp(-701.0)}), std::invalid_argument);
}

TEST_CASE("counterexample suite passes") {
  const auto r = run_counterexample_suite();
  CHECK(r.failed == 0);
  CHECK(r.inconclusive == 0);
  CHECK(count_kind(r, "closed_form") == 6);
  CHECK(count_kind(r, "decrease_gt_1") == 4);
}

TEST_CASE("proof replication: worked examples") {
  auto r = proof_replication(generalized_normal(1, 2, 0.9), ClassSpec(2, 1, 1, 1), {1, 2, 5, 10});
  CHECK(r.items.size() == 12);
  CHECK(r.passed == 12);

  r = proof_replication(uniform(0, 1), ClassSpec(2, 1, 2, 1), {0.5, 1, 2, 5});
  CHECK(r.failed == 0);
  for (const auto& it : r.items) {
    if (it.kind == "theta_lower") CHECK(it.margin > 0.0);
  }
  // The rescaled density lives on [0, 2]; balls with w >= 2 cover it.
  CHECK(count_kind(r, "full_support") == 2);

  r = proof_replication(counterexample_p(), ClassSpec(2, 1, 1, 1), {1, 2});
  CHECK(r.skipped == 2);
  CHECK(r.passed == 0);
}

TEST_CASE("proof suite passes on four densities") {
  const auto r = run_proof_suite();
  CHECK(r.failed == 0);
  CHECK(r.inconclusive == 0);
  CHECK(count_kind(r, "identity") == 20);
  CHECK(count_kind(r, "theta_lower") == 20);
  CHECK(count_kind(r, "delta_upper") == 20);
}

TEST_CASE("lemma2 sweep") {
  auto r = lemma2_sweep(0, 1);
  CHECK(r.items.size() == 4);
  CHECK(r.passed == 4);

  r = lemma2_sweep(10000, 12345);
  CHECK(r.failed == 0);
  CHECK(r.items.back().reason.find("0 violations") != std::string::npos);
  for (const auto& it : r.items) {
    if (it.kind == "equality") CHECK(std::abs(it.lhs - it.rhs) <= 1e-15);
  }
}

TEST_CASE("propagation suite passes") {
  const auto r = run_propagation_suite();
  CHECK(r.failed == 0);
  CHECK(r.inconclusive == 0);
  CHECK(r.passed == r.items.size());
}

TEST_CASE("report serialization") {
  const auto a = lemma2_sweep(500, 9);
  const auto b = lemma2_sweep(500, 9);
  const auto c = lemma2_sweep(500, 10);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(to_csv(a) != to_csv(c));

  const std::string csv = to_csv(a);
  CHECK(csv.rfind("scenario,id,kind,lhs,rhs,margin,tolerance,delta,w,verdict,reason\n", 0) == 0);
  CHECK(csv.find("0.367879441171,") != std::string::npos);

  const auto j = nlohmann::json::parse(to_json(a));
  CHECK(j["scenario"] == "lemma2");
  CHECK(j["items"].size() == a.items.size());
  CHECK(j["passed"].get<std::size_t>() == a.passed);

  VerificationReport merged;
  merged.append(a);
  merged.append(c);
  CHECK(merged.items.size() == a.items.size() + c.items.size());
  CHECK(merged.passed == a.passed + c.passed);
  CHECK(to_text(a).find("lemma2: 5 passed, 0 failed") != std::string::npos);
}
