#pragma once

// Probability densities on R^n (n <= 3 for anything integral-based) as
// immutable descriptors: an evaluation rule, an axis-aligned support box,
// per-axis split points for the quadrature engine, and whatever closed forms
// are known.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "entropic/quadrature.hpp"

namespace entropic {

/// Raised when a composed density cannot produce a value (e.g. the
/// convolution integral did not converge at the requested point).
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters (alpha, v, m, n) of the class of n-dimensional densities with
/// alpha-moment strictly below v and essential supremum strictly below m.
struct ClassSpec {
  double alpha;
  double v;
  double m;
  std::size_t dimension;

  ClassSpec(double alpha, double v, double m, std::size_t dimension);

  friend bool operator==(const ClassSpec&, const ClassSpec&) = default;
};

enum class SupMethod { closed_form, propagated, grid_estimate };

[[nodiscard]] const char* to_string(SupMethod m);

/// Known exact values. Each may be infinite (divergent integrals).
struct ClosedForms {
  std::optional<double> entropy;
  /// alpha -> E||X||_alpha^alpha; empty optional when unknown for that alpha.
  std::function<std::optional<double>(double)> alpha_moment;
  std::optional<double> ess_sup;
  std::string note;

  [[nodiscard]] std::optional<double> moment(double alpha) const {
    return alpha_moment ? alpha_moment(alpha) : std::nullopt;
  }
};

class Density {
 public:
  using EvalRule = std::function<double(std::span<const double>)>;

  struct Parts {
    std::string name;
    std::size_t dimension = 1;
    EvalRule eval;                             // only called inside the support box
    std::vector<Interval> support;             // one per axis
    std::vector<std::vector<double>> splits;   // per-axis quadrature split points
    ClosedForms closed;
    std::optional<double> propagated_sup;      // upper bound derived by a transform rule
    bool propagated_sup_exact = false;         // bound is attained, not just an upper bound
  };

  explicit Density(Parts parts);

  /// pdf value; zero outside the support box. Throws std::invalid_argument
  /// when x has the wrong length.
  [[nodiscard]] double operator()(std::span<const double> x) const;
  [[nodiscard]] double operator()(double x) const;

  [[nodiscard]] const std::string& name() const { return parts_->name; }
  [[nodiscard]] std::size_t dimension() const { return parts_->dimension; }
  [[nodiscard]] const std::vector<Interval>& support() const { return parts_->support; }
  [[nodiscard]] const std::vector<std::vector<double>>& splits() const { return parts_->splits; }
  [[nodiscard]] const ClosedForms& closed_forms() const { return parts_->closed; }
  [[nodiscard]] std::optional<double> propagated_sup() const { return parts_->propagated_sup; }
  [[nodiscard]] bool propagated_sup_exact() const { return parts_->propagated_sup_exact; }
  [[nodiscard]] bool in_support(std::span<const double> x) const;

  /// Support box as an integration region carrying this density's splits.
  [[nodiscard]] IntegrationRegion region() const;

 private:
  std::shared_ptr<const Parts> parts_;
};

// Catalog.
[[nodiscard]] Density uniform(double a, double b);
[[nodiscard]] Density normal(double mu, double sigma);
[[nodiscard]] Density laplace(double mu, double b);

/// Density proportional to exp(-(n/(alpha v)) ||x||_alpha^alpha), normalized;
/// its alpha-moment is exactly v.
[[nodiscard]] Density generalized_normal(std::size_t n, double alpha, double v);

/// Normalizing constant of generalized_normal(n, alpha, v), i.e. its value at 0.
[[nodiscard]] double generalized_normal_peak(std::size_t n, double alpha, double v);

/// 1/(x log^2 x) on (e, inf): bounded by 1/e, every moment infinite, h = +inf.
[[nodiscard]] Density counterexample_p();

/// -1/(x log x (log(-log x))^2) on (0, e^-e): bounded support, unbounded
/// density, h = -inf.
[[nodiscard]] Density counterexample_q();

/// Numerical cutoffs for the counterexamples: p is reported on windows
/// (e, W] with W <= e^700, q on [eps, e^-e) with eps >= e^-700.
inline constexpr double kCounterexampleLogCutoff = 700.0;

// Transforms.

/// Density of cX: x -> d(x/c)/c^n.
[[nodiscard]] Density scale(const Density& d, double c);

/// n independent copies of a one-dimensional density.
[[nodiscard]] Density iid_product(const Density& component, std::size_t n);

/// |pX - pY| / delta. `delta` must be the L1 distance between the two.
/// For n = 1 sign changes of pX - pY are located and added as split points
/// along with `crossings`.
[[nodiscard]] Density normalized_difference(const Density& px, const Density& py, double delta,
                                            std::vector<double> crossings = {});

/// Density of X1 + X2 for independent one-dimensional X1, X2. Each
/// evaluation runs an adaptive integral; non-convergence throws
/// EvaluationError.
[[nodiscard]] Density convolve(const Density& d1, const Density& d2);

/// Points in `iv` where g changes sign, located by sampling then bisection.
[[nodiscard]] std::vector<double> sign_changes(const std::function<double(double)>& g, Interval iv,
                                               std::size_t samples = 2048);

}  // namespace entropic
