#pragma once

// Adaptive Gauss-Kronrod integration on finite and infinite intervals, plus
// iterated integration over boxes of dimension <= 3.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace entropic {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool finite() const { return lo > -kInf && hi < kInf; }
  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
  [[nodiscard]] bool empty() const { return !(hi > lo); }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions = 0;
  bool converged = true;
};

/// A box in R^n with optional interior split points per axis.
///
/// Split points outside the open axis interval are dropped on construction,
/// so the stored lists always satisfy lo < s < hi and are sorted.
class IntegrationRegion {
 public:
  IntegrationRegion() = default;
  explicit IntegrationRegion(std::vector<Interval> axes);
  IntegrationRegion(std::vector<Interval> axes, std::vector<std::vector<double>> splits);

  [[nodiscard]] std::size_t dimension() const { return axes_.size(); }
  [[nodiscard]] const Interval& axis(std::size_t i) const { return axes_.at(i); }
  [[nodiscard]] const std::vector<double>& splits(std::size_t i) const { return splits_.at(i); }
  [[nodiscard]] bool empty() const;

  void add_split(std::size_t axis, double x);

 private:
  void normalize(std::size_t axis);

  std::vector<Interval> axes_;
  std::vector<std::vector<double>> splits_;
};

struct QuadratureOptions {
  double tol = 1e-9;
  std::size_t max_intervals = 10000;
};

inline constexpr double kDefaultTol1D = 1e-9;
inline constexpr double kDefaultTolND = 1e-7;

using Integrand1D = std::function<double(double)>;
using IntegrandND = std::function<double(std::span<const double>)>;

/// Integrates f over the single axis of `region`.
///
/// Infinite endpoints are compactified (x = a + t/(1-t) for [a, inf),
/// x = t/(1-t^2) for the whole line) and the region is split at every
/// declared point before adaptation starts. Pieces share one global error
/// budget; the interval with the largest local error is bisected until the
/// summed error estimate is <= tol or max_intervals is reached.
[[nodiscard]] QuadratureResult integrate(const Integrand1D& f, const IntegrationRegion& region,
                                         const QuadratureOptions& opts = {});

[[nodiscard]] QuadratureResult integrate(const Integrand1D& f, Interval iv,
                                         const QuadratureOptions& opts = {});

/// Iterated integration for 1 <= n <= 3. Inner error estimates are carried
/// through the outer rules and added to the outer estimate. Throws
/// std::invalid_argument for n > 3.
[[nodiscard]] QuadratureResult integrate_nd(const IntegrandND& f, const IntegrationRegion& region,
                                            const QuadratureOptions& opts = {.tol = kDefaultTolND});

/// x*log(x) with the 0 log 0 = 0 convention applied at and below 1e-300.
[[nodiscard]] double xlogx(double x);

inline constexpr std::size_t kMaxDimension = 3;

}  // namespace entropic
