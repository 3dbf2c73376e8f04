#pragma once

// Information functionals of densities, all in nats. Every integral goes
// through the adaptive engine in quadrature.hpp; a value whose integral did
// not converge carries converged == false and should not be trusted.

#include <optional>
#include <utility>

#include "entropic/density.hpp"
#include "entropic/quadrature.hpp"

namespace entropic {

struct FunctionalValue {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

struct SupEstimate {
  double value = 0.0;
  SupMethod method = SupMethod::closed_form;
};

/// Default absolute tolerance for a functional of a density of dimension n.
[[nodiscard]] double default_tol(std::size_t n);

/// -∫ p log p over the support, with 0 log 0 = 0.
[[nodiscard]] FunctionalValue differential_entropy(const Density& d, std::optional<double> tol = {});

/// -∫ p log p restricted to `region` (intersected with the support).
[[nodiscard]] FunctionalValue entropy_over(const Density& d, const IntegrationRegion& region,
                                           std::optional<double> tol = {});

/// ∫ ||x||_alpha^alpha p(x) dx.
[[nodiscard]] FunctionalValue alpha_moment(const Density& d, double alpha, std::optional<double> tol = {});

[[nodiscard]] FunctionalValue moment_over(const Density& d, double alpha, const IntegrationRegion& region,
                                          std::optional<double> tol = {});

[[nodiscard]] FunctionalValue mass_over(const Density& d, const IntegrationRegion& region,
                                        std::optional<double> tol = {});

/// Closed form if declared, else the transform's propagated bound, else a
/// multi-start grid search (a non-certified lower bound).
[[nodiscard]] SupEstimate ess_sup(const Density& d);

/// Largest value found by the grid search, ignoring declared bounds.
[[nodiscard]] double sampled_sup(const Density& d);

/// ∫ |p - q|, in [0, 2].
[[nodiscard]] FunctionalValue total_variation(const Density& p, const Density& q,
                                              std::optional<double> tol = {});

/// ∫ p log(p/q). Throws std::invalid_argument when a sampled point has
/// p > 0 and q = 0.
[[nodiscard]] FunctionalValue relative_entropy(const Density& p, const Density& q,
                                               std::optional<double> tol = {});

/// The support box of d intersected with the sup-norm ball of radius w.
[[nodiscard]] IntegrationRegion sup_norm_ball(const Density& d, double w);

/// ∫_{||y||_inf <= w} q log(1/q).
[[nodiscard]] FunctionalValue truncated_entropy(const Density& d, double w, std::optional<double> tol = {});

/// ∫_{||y||_inf <= w} q log(q / phi), phi = generalized_normal(n, alpha,
/// c_m^{alpha/n} v) with c_m = max(m, 1) taken from `spec`.
[[nodiscard]] FunctionalValue truncated_relative_entropy_to_gn(const Density& d, double w,
                                                               const ClassSpec& spec,
                                                               std::optional<double> tol = {});

struct XlogxGap {
  double lhs = 0.0;  // |x log x - y log y|
  double rhs = 0.0;  // |x - y| log(1/|x - y|)
};

/// Both sides of the x log x modulus-of-continuity inequality; x and y must
/// lie in [0, 1/e].
[[nodiscard]] XlogxGap xlogx_gap(double x, double y);

}  // namespace entropic
