#include "entropic/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "entropic/special.hpp"

namespace entropic {

namespace {

using std::numbers::e;

// Relative margin required before a non-certified grid sup counts as below m.
constexpr double kGridSupMargin = 0.01;

std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

TheoremConstants theorem_constants(const ClassSpec& s) {
  const double n = static_cast<double>(s.dimension);
  const double a = s.alpha;
  const double log_two_gamma = std::log(2.0 * gamma_fn(1.0 / a + 1.0));

  TheoremConstants c{.entropy_bound = 0.0, .c1 = 0.0, .c2 = 0.0, .b1 = 0.0, .spec = s};
  c.entropy_bound = (n / a) * std::abs(std::log(a * s.v / n)) + std::log(std::max(1.0, s.m)) +
                    n * log_two_gamma + n / a + 1.0;
  c.c1 = (n / a) * std::abs(std::log(2.0 * a * s.v / n)) + std::abs(std::log(s.m * e)) +
         std::log(e / 2.0) + n * log_two_gamma + n / a + 1.0;
  c.c2 = n / a + 2.0;
  c.b1 = (a * s.v / n) * std::pow(2.0 * gamma_fn(1.0 / a + 1.0), a);
  return c;
}

double continuity_bound(const ClassSpec& spec, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("continuity_bound needs delta > 0");
  if (delta > spec.m) {
    throw HypothesisViolated("L1 distance " + fmt_num(delta) + " exceeds m = " + fmt_num(spec.m) +
                             "; the continuity bound is not claimed");
  }
  const auto c = theorem_constants(spec);
  return c.c1 * delta - c.c2 * delta * std::log(delta);
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::member:
      return "member";
    case Membership::non_member:
      return "non_member";
    case Membership::inconclusive:
      return "inconclusive";
  }
  return "?";
}

MembershipReport check_membership(const Density& d, const ClassSpec& spec, std::optional<double> tol) {
  if (d.dimension() != spec.dimension) {
    throw std::invalid_argument("density '" + d.name() + "' has dimension " + std::to_string(d.dimension()) +
                                " but the class has dimension " + std::to_string(spec.dimension));
  }
  MembershipReport r;
  r.ess_sup = ess_sup(d);
  r.margin_m = spec.m - r.ess_sup.value;
  r.alpha_moment = alpha_moment(d, spec.alpha, tol);
  r.margin_v = spec.v - r.alpha_moment.value;

  std::vector<std::string> notes;
  bool fail = false;
  bool tie = false;

  if (!r.alpha_moment.converged) {
    fail = true;
    const auto cf = d.closed_forms().moment(spec.alpha);
    notes.push_back(cf && std::isinf(*cf) ? "alpha-moment divergent (closed form +inf)"
                                          : "alpha-moment integral did not converge (heavy tail?)");
  } else if (r.margin_v < -r.alpha_moment.error_estimate) {
    fail = true;
    notes.push_back("alpha-moment " + fmt_num(r.alpha_moment.value) + " >= v");
  } else if (r.margin_v <= r.alpha_moment.error_estimate) {
    tie = true;
    notes.push_back("alpha-moment within quadrature error of v");
  }

  const double sup = r.ess_sup.value;
  switch (r.ess_sup.method) {
    case SupMethod::closed_form:
      if (!(r.margin_m > 0.0)) {
        fail = true;
        notes.push_back("ess-sup " + fmt_num(sup) + " >= m");
      }
      break;
    case SupMethod::propagated:
      if (!(r.margin_m > 0.0)) {
        if (d.propagated_sup_exact()) {
          fail = true;
          notes.push_back("ess-sup " + fmt_num(sup) + " >= m");
        } else if (const double seen = sampled_sup(d); seen >= spec.m) {
          fail = true;
          notes.push_back("sampled density value " + fmt_num(seen) + " >= m");
        } else {
          tie = true;
          notes.push_back("propagated ess-sup bound " + fmt_num(sup) + " >= m");
        }
      }
      break;
    case SupMethod::grid_estimate:
      if (!(r.margin_m > 0.0)) {
        fail = true;
        notes.push_back("sampled density value " + fmt_num(sup) + " >= m");
      } else if (r.margin_m < kGridSupMargin * spec.m) {
        tie = true;
        notes.push_back("grid ess-sup estimate too close to m to certify");
      } else {
        notes.push_back("ess-sup from grid search (non-certified)");
      }
      break;
  }

  r.verdict = fail ? Membership::non_member : (tie ? Membership::inconclusive : Membership::member);
  for (std::size_t i = 0; i < notes.size(); ++i) {
    if (i) r.diagnostic += "; ";
    r.diagnostic += notes[i];
  }
  return r;
}

ClassSpec scaled_class_params(const ClassSpec& s) {
  const double n = static_cast<double>(s.dimension);
  return {s.alpha, std::pow(s.m * e, s.alpha / n) * s.v, 1.0 / e, s.dimension};
}

ClassSpec z_class_params(const ClassSpec& s, double delta) {
  if (!(delta > 0.0 && delta <= 2.0)) throw std::invalid_argument("z_class_params needs 0 < delta <= 2");
  const double n = static_cast<double>(s.dimension);
  return {s.alpha, 2.0 * std::pow(s.m * e, s.alpha / n) * s.v / delta, 2.0 / (e * delta), s.dimension};
}

ClassSpec sum_class_params(const ClassSpec& a, const ClassSpec& b) {
  if (a.alpha != b.alpha) throw std::invalid_argument("sum_class_params needs equal alpha");
  if (a.dimension != 1 || b.dimension != 1) {
    throw std::invalid_argument("sum_class_params is defined for scalar classes");
  }
  const double c_alpha = a.alpha <= 1.0 ? 1.0 : std::pow(2.0, a.alpha - 1.0);
  return {a.alpha, c_alpha * (a.v + b.v), std::min(a.m, b.m), 1};
}

BoundCheck check_entropy_bound(const Density& d, const ClassSpec& spec, std::optional<double> tol,
                               const std::optional<MembershipReport>& membership) {
  MembershipReport m = membership ? *membership : check_membership(d, spec, tol);
  if (!m.belongs()) {
    throw NotInClass("'" + d.name() + "' is not a confirmed member (" + to_string(m.verdict) +
                         "): " + m.diagnostic,
                     std::move(m));
  }
  const auto h = differential_entropy(d, tol);
  BoundCheck b;
  b.lhs = std::abs(h.value);
  b.rhs = theorem_constants(spec).entropy_bound;
  b.margin = b.rhs - b.lhs;
  b.tolerance = h.error_estimate;
  b.converged = h.converged;
  b.satisfied = h.converged && b.margin >= -b.tolerance;
  b.context = "|h(" + d.name() + ")| <= entropy bound";
  return b;
}

BoundCheck check_continuity_bound(const Density& px, const Density& py, const ClassSpec& spec,
                                  std::optional<double> tol, bool membership_known) {
  if (!membership_known) {
    for (const Density* d : {&px, &py}) {
      auto m = check_membership(*d, spec, tol);
      if (!m.belongs()) {
        throw NotInClass("'" + d->name() + "' is not a confirmed member (" + to_string(m.verdict) +
                             "): " + m.diagnostic,
                         std::move(m));
      }
    }
  }
  const auto tv = total_variation(px, py, tol);
  if (tv.converged && tv.value - tv.error_estimate > spec.m) {
    throw HypothesisViolated("L1 distance " + fmt_num(tv.value) + " exceeds m = " + fmt_num(spec.m) +
                             "; the continuity bound is not claimed");
  }
  const auto hx = differential_entropy(px, tol);
  const auto hy = differential_entropy(py, tol);

  BoundCheck b;
  b.delta = tv.value;
  b.lhs = std::abs(hx.value - hy.value);
  b.converged = tv.converged && hx.converged && hy.converged;
  b.tolerance = hx.error_estimate + hy.error_estimate;
  b.context = "|h(" + px.name() + ") - h(" + py.name() + ")| <= c1 d + c2 d log(1/d)";

  if (tv.value <= tv.error_estimate) {
    // Densities agree a.e.: the bound degenerates to 0.
    b.rhs = 0.0;
  } else {
    const double delta = std::min(tv.value, spec.m);
    b.rhs = continuity_bound(spec, delta);
    const auto c = theorem_constants(spec);
    const double slope = c.c1 + c.c2 * (-std::log(delta) - 1.0);
    b.tolerance += std::abs(slope) * tv.error_estimate;
  }
  b.margin = b.rhs - b.lhs;
  b.satisfied = b.converged && b.margin >= -b.tolerance;
  return b;
}

}  // namespace entropic
