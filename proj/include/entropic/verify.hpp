#pragma once

// Verification scenarios: theorem suites over a density x class matrix,
// divergence sweeps for the two counterexamples, replication of the steps of
// the entropy-bound proof, and a sweep of the x log x modulus inequality.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entropic/bounds.hpp"

namespace entropic {

enum class Verdict { pass, fail, inconclusive, skipped };

[[nodiscard]] const char* to_string(Verdict v);

struct ReportItem {
  std::string id;
  std::string kind;  // which check produced the item
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  std::optional<double> delta;
  std::optional<double> w;
  Verdict verdict = Verdict::skipped;
  std::string reason;
};

struct VerificationReport {
  std::string scenario;
  std::vector<ReportItem> items;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t inconclusive = 0;
  std::size_t skipped = 0;
  double runtime_seconds = 0.0;

  void add(ReportItem item);
  void append(const VerificationReport& other);
  [[nodiscard]] bool ok() const { return failed == 0; }
};

/// JSON document with the items, counts and runtime.
[[nodiscard]] std::string to_json(const VerificationReport& r);

/// One row per item; 12 significant digits, no runtime column, so equal
/// inputs give byte-identical output.
[[nodiscard]] std::string to_csv(const VerificationReport& r);

/// Human-readable listing and summary line.
[[nodiscard]] std::string to_text(const VerificationReport& r);

struct DensityCase {
  Density density;
  ClassSpec spec;
};

struct PairCase {
  std::string id;
  Density x;
  Density y;
  ClassSpec spec;
  std::optional<double> tv_oracle;  // closed-form L1 distance, cross-checked when present
};

struct TheoremMatrix {
  std::vector<Density> densities;
  std::vector<ClassSpec> specs;       // every density is tried against every spec of its dimension
  std::vector<DensityCase> extra;     // additional explicit (density, spec) items
  std::vector<PairCase> pairs;
};

[[nodiscard]] TheoremMatrix default_theorem_matrix();

/// Entropy bound for every (density, spec) item and continuity bound for
/// every pair. Non-members are skipped with the membership diagnostic, pairs
/// with distance above m are skipped as hypothesis violations.
[[nodiscard]] VerificationReport run_theorem_suite(const TheoremMatrix& matrix, std::optional<double> tol = {});

struct SweepRow {
  double param = 0.0;  // w for p, eps for q
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  std::optional<double> closed_form;
};

/// Log Y + 2 (1 - (1 + log Y)/Y) with Y = log w; 0 for w <= e.
[[nodiscard]] double counterexample_p_truncated_entropy(double w);

/// Delta_w of counterexample_p on each w (increasing, log w <= the cutoff).
[[nodiscard]] std::vector<SweepRow> divergence_sweep_p(const std::vector<double>& w_grid);

/// Entropy of counterexample_q restricted to (eps, e^-e) on each eps
/// (decreasing, eps >= e^-cutoff).
[[nodiscard]] std::vector<SweepRow> divergence_sweep_q(const std::vector<double>& eps_grid);

/// Both sweeps on their default grids, with closed-form agreement and
/// monotonicity items.
[[nodiscard]] VerificationReport run_counterexample_suite();

/// For each w: the Delta_w / Theta_w identity on the rescaled density
/// q = scale(d, c_m^{1/n}), Theta_w >= -1, and the bound on Delta_w.
[[nodiscard]] VerificationReport proof_replication(const Density& d, const ClassSpec& spec,
                                                   const std::vector<double>& w_grid,
                                                   std::optional<double> tol = {});

/// Four densities over a five-point w grid.
[[nodiscard]] VerificationReport run_proof_suite(std::optional<double> tol = {});

/// sample_count seeded pairs in [0, 1/e]^2 plus the boundary cases.
[[nodiscard]] VerificationReport lemma2_sweep(std::size_t sample_count, std::uint64_t seed);

/// Membership of scaled members, normalized differences and convolutions in
/// the propagated classes, each re-verified by quadrature.
[[nodiscard]] VerificationReport run_propagation_suite(std::optional<double> tol = {});

}  // namespace entropic
