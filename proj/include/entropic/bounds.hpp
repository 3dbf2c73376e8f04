#pragma once

// Closed-form constants of the entropy existence/continuity theorem for the
// (alpha, v, m) class, membership tests, and the rules that move class
// parameters through scaling, normalized differences and independent sums.

#include <optional>
#include <stdexcept>
#include <string>

#include "entropic/density.hpp"
#include "entropic/functionals.hpp"

namespace entropic {

struct TheoremConstants {
  double entropy_bound;  // bound on |h(p)| for every class member
  double c1;
  double c2;             // n/alpha + 2
  double b1;             // (alpha v / n) (2 Gamma(1/alpha + 1))^alpha
  ClassSpec spec;
};

[[nodiscard]] TheoremConstants theorem_constants(const ClassSpec& spec);

/// The continuity bound is only claimed for ||pX - pY||_1 <= m.
class HypothesisViolated : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// c1 delta + c2 delta log(1/delta) for 0 < delta <= m.
[[nodiscard]] double continuity_bound(const ClassSpec& spec, double delta);

enum class Membership { member, non_member, inconclusive };

[[nodiscard]] const char* to_string(Membership m);

struct MembershipReport {
  FunctionalValue alpha_moment;
  SupEstimate ess_sup;
  Membership verdict = Membership::non_member;
  double margin_v = 0.0;  // v - moment
  double margin_m = 0.0;  // m - sup
  std::string diagnostic;

  [[nodiscard]] bool belongs() const { return verdict == Membership::member; }
};

/// Strict-inequality membership. A moment margin inside the quadrature error
/// is inconclusive, as is a propagated (upper-bound) sup that reaches m
/// unless a sampled density value also reaches m.
[[nodiscard]] MembershipReport check_membership(const Density& d, const ClassSpec& spec,
                                                std::optional<double> tol = {});

/// The bounds are not claimed outside the class.
class NotInClass : public std::domain_error {
 public:
  NotInClass(const std::string& what, MembershipReport report)
      : std::domain_error(what), report_(std::move(report)) {}
  [[nodiscard]] const MembershipReport& report() const { return report_; }

 private:
  MembershipReport report_;
};

/// Parameters of (m e)^{1/n} X: (alpha, (m e)^{alpha/n} v, 1/e, n).
[[nodiscard]] ClassSpec scaled_class_params(const ClassSpec& spec);

/// Parameters of the normalized difference of two scaled members at L1
/// distance delta: (alpha, 2 (m e)^{alpha/n} v / delta, 2/(e delta), n).
[[nodiscard]] ClassSpec z_class_params(const ClassSpec& spec, double delta);

/// Parameters of X1 + X2 for independent scalar members:
/// (alpha, c_alpha (v1 + v2), min(m1, m2), 1), c_alpha = max(1, 2^{alpha-1}).
[[nodiscard]] ClassSpec sum_class_params(const ClassSpec& a, const ClassSpec& b);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;     // rhs - lhs
  double tolerance = 0.0;  // combined numerical error of both sides
  bool satisfied = false;  // margin >= -tolerance
  bool converged = true;   // every underlying integral converged
  std::optional<double> delta;
  std::string context;
};

/// |h(d)| against theorem_constants(spec).entropy_bound. Throws NotInClass
/// unless d is a member; pass `membership` to skip recomputing it.
[[nodiscard]] BoundCheck check_entropy_bound(const Density& d, const ClassSpec& spec,
                                             std::optional<double> tol = {},
                                             const std::optional<MembershipReport>& membership = {});

/// |h(pX) - h(pY)| against continuity_bound(spec, ||pX - pY||_1). Throws
/// NotInClass for non-members and HypothesisViolated when the distance
/// exceeds m by more than its error estimate.
[[nodiscard]] BoundCheck check_continuity_bound(const Density& px, const Density& py, const ClassSpec& spec,
                                                std::optional<double> tol = {},
                                                bool membership_known = false);

}  // namespace entropic
