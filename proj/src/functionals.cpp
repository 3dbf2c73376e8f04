#include "entropic/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace entropic {

namespace {

constexpr std::size_t kMaxGridDimension = 3;

void require_integrable_dim(const Density& d) {
  if (d.dimension() > kMaxDimension) {
    throw std::invalid_argument("integral functionals support dimension <= 3; '" + d.name() +
                                "' has dimension " + std::to_string(d.dimension()));
  }
}

double resolve_tol(std::optional<double> tol, std::size_t n) {
  const double t = tol.value_or(default_tol(n));
  if (!(t > 0.0)) throw std::invalid_argument("tolerance must be positive");
  return t;
}

FunctionalValue run(const IntegrandND& f, const IntegrationRegion& region, double tol) {
  try {
    const auto r = integrate_nd(f, region, {.tol = tol});
    return {r.value, r.error_estimate, r.converged};
  } catch (const EvaluationError&) {
    return {std::numeric_limits<double>::quiet_NaN(), kInf, false};
  }
}

IntegrationRegion intersect(const Density& d, const IntegrationRegion& region) {
  if (region.dimension() != d.dimension()) {
    throw std::invalid_argument("region dimension does not match density dimension");
  }
  std::vector<Interval> axes;
  std::vector<std::vector<double>> splits;
  for (std::size_t i = 0; i < d.dimension(); ++i) {
    const Interval s = d.support()[i];
    const Interval r = region.axis(i);
    axes.push_back({std::max(s.lo, r.lo), std::min(s.hi, r.hi)});
    auto& sp = splits.emplace_back(d.splits()[i]);
    sp.insert(sp.end(), region.splits(i).begin(), region.splits(i).end());
  }
  return {std::move(axes), std::move(splits)};
}

double alpha_norm_pow(std::span<const double> x, double alpha) {
  double s = 0.0;
  for (double xi : x) s += std::pow(std::abs(xi), alpha);
  return s;
}

// Union of the two support boxes with both split lists.
IntegrationRegion union_region(const Density& p, const Density& q) {
  if (p.dimension() != q.dimension()) {
    throw std::invalid_argument("densities have different dimensions (" + std::to_string(p.dimension()) +
                                " vs " + std::to_string(q.dimension()) + ")");
  }
  std::vector<Interval> axes;
  std::vector<std::vector<double>> splits;
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    const Interval a = p.support()[i];
    const Interval b = q.support()[i];
    axes.push_back({std::min(a.lo, b.lo), std::max(a.hi, b.hi)});
    auto& s = splits.emplace_back(p.splits()[i]);
    s.insert(s.end(), q.splits()[i].begin(), q.splits()[i].end());
    for (const Interval& iv : {a, b}) {
      if (std::isfinite(iv.lo)) s.push_back(iv.lo);
      if (std::isfinite(iv.hi)) s.push_back(iv.hi);
    }
  }
  return {std::move(axes), std::move(splits)};
}

// Map u in (0, 1) onto an axis interval, compactifying infinite ends.
double axis_point(const Interval& iv, double u) {
  if (iv.finite()) return iv.lo + u * (iv.hi - iv.lo);
  if (iv.lo == -kInf && iv.hi == kInf) {
    const double s = 2.0 * u - 1.0;
    return s / (1.0 - s * s);
  }
  if (iv.hi == kInf) return iv.lo + u / (1.0 - u);
  return iv.hi - (1.0 - u) / u;
}

// Sample points of a density's support on a lattice in compactified
// coordinates, `per_axis` points per axis.
template <class Visit>
void lattice(const Density& d, std::size_t per_axis, Visit&& visit) {
  const std::size_t n = d.dimension();
  std::array<double, kMaxGridDimension> x{};
  std::array<std::size_t, kMaxGridDimension> idx{};
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= per_axis;
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = rem % per_axis;
      rem /= per_axis;
      const double u = (static_cast<double>(idx[i]) + 0.5) / static_cast<double>(per_axis);
      x[i] = axis_point(d.support()[i], u);
    }
    visit(std::span<const double>(x.data(), n));
  }
}

double grid_sup(const Density& d) {
  const std::size_t n = d.dimension();
  if (n > kMaxGridDimension) {
    throw std::invalid_argument("grid ess-sup search supports dimension <= 3");
  }
  const std::size_t per_axis = n == 1 ? 4096 : (n == 2 ? 256 : 48);

  struct Candidate {
    double value;
    std::array<double, kMaxGridDimension> x;
  };
  std::vector<Candidate> best;
  lattice(d, per_axis, [&](std::span<const double> x) {
    const double v = d(x);
    if (!std::isfinite(v)) return;
    Candidate c{v, {}};
    std::copy(x.begin(), x.end(), c.x.begin());
    best.push_back(c);
    if (best.size() > 64) {
      std::nth_element(best.begin(), best.begin() + 8, best.end(),
                       [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
      best.resize(8);
    }
  });
  std::sort(best.begin(), best.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  if (best.size() > 8) best.resize(8);

  // Refine each start with a shrinking coordinate-wise pattern search.
  double sup = best.empty() ? 0.0 : best.front().value;
  for (Candidate c : best) {
    std::array<double, kMaxGridDimension> step{};
    for (std::size_t i = 0; i < n; ++i) {
      const Interval iv = d.support()[i];
      step[i] = iv.finite() ? (iv.hi - iv.lo) / static_cast<double>(per_axis)
                            : std::max(1.0, std::abs(c.x[i])) * 4.0 / static_cast<double>(per_axis);
    }
    for (int round = 0; round < 60; ++round) {
      bool moved = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (double dir : {-1.0, 1.0}) {
          auto trial = c.x;
          trial[i] += dir * step[i];
          const double v = d(std::span<const double>(trial.data(), n));
          if (std::isfinite(v) && v > c.value) {
            c.value = v;
            c.x = trial;
            moved = true;
          }
        }
      }
      if (!moved) {
        for (std::size_t i = 0; i < n; ++i) step[i] *= 0.5;
      }
    }
    sup = std::max(sup, c.value);
  }
  return sup;
}

}  // namespace

double default_tol(std::size_t n) { return n <= 1 ? kDefaultTol1D : kDefaultTolND; }

FunctionalValue entropy_over(const Density& d, const IntegrationRegion& region, std::optional<double> tol) {
  require_integrable_dim(d);
  const auto r = intersect(d, region);
  if (r.empty()) return {};
  return run([&d](std::span<const double> x) { return -xlogx(d(x)); }, r, resolve_tol(tol, d.dimension()));
}

FunctionalValue differential_entropy(const Density& d, std::optional<double> tol) {
  return entropy_over(d, d.region(), tol);
}

FunctionalValue moment_over(const Density& d, double alpha, const IntegrationRegion& region,
                            std::optional<double> tol) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  require_integrable_dim(d);
  const auto r = intersect(d, region);
  if (r.empty()) return {};
  return run(
      [&d, alpha](std::span<const double> x) {
        const double p = d(x);
        return p == 0.0 ? 0.0 : alpha_norm_pow(x, alpha) * p;
      },
      r, resolve_tol(tol, d.dimension()));
}

FunctionalValue alpha_moment(const Density& d, double alpha, std::optional<double> tol) {
  return moment_over(d, alpha, d.region(), tol);
}

FunctionalValue mass_over(const Density& d, const IntegrationRegion& region, std::optional<double> tol) {
  require_integrable_dim(d);
  const auto r = intersect(d, region);
  if (r.empty()) return {};
  return run([&d](std::span<const double> x) { return d(x); }, r, resolve_tol(tol, d.dimension()));
}

double sampled_sup(const Density& d) { return grid_sup(d); }

SupEstimate ess_sup(const Density& d) {
  if (auto s = d.closed_forms().ess_sup) return {*s, SupMethod::closed_form};
  if (auto s = d.propagated_sup()) return {*s, SupMethod::propagated};
  return {grid_sup(d), SupMethod::grid_estimate};
}

FunctionalValue total_variation(const Density& p, const Density& q, std::optional<double> tol) {
  require_integrable_dim(p);
  IntegrationRegion region = union_region(p, q);
  if (p.dimension() == 1) {
    for (double c : sign_changes([&](double x) { return p(x) - q(x); }, region.axis(0))) {
      region.add_split(0, c);
    }
  }
  return run([&](std::span<const double> x) { return std::abs(p(x) - q(x)); }, region,
             resolve_tol(tol, p.dimension()));
}

FunctionalValue relative_entropy(const Density& p, const Density& q, std::optional<double> tol) {
  require_integrable_dim(p);
  const IntegrationRegion region = union_region(p, q);

  // Spot-check support containment on ~1000 points of p's support. Inside q's declared support a zero
  // of q next to a tiny p is taken as tail underflow rather than a support gap.
  const std::size_t per_axis = p.dimension() == 1 ? 1000 : (p.dimension() == 2 ? 32 : 10);
  lattice(p, per_axis, [&](std::span<const double> x) {
    const double pv = p(x);
    if (pv > 1e-290 && q(x) == 0.0 && (!q.in_support(x) || pv > 1e-12)) {
      throw std::invalid_argument("support of '" + p.name() + "' is not contained in support of '" +
                                  q.name() + "'");
    }
  });

  return run(
      [&](std::span<const double> x) {
        const double pv = p(x);
        if (pv <= 1e-290) return 0.0;
        double qv = q(x);
        if (qv == 0.0) {
          if (!q.in_support(x)) return kInf;
          qv = std::numeric_limits<double>::min();
        }
        return pv * (std::log(pv) - std::log(qv));
      },
      region, resolve_tol(tol, p.dimension()));
}

IntegrationRegion sup_norm_ball(const Density& d, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("truncation radius w must be positive");
  return intersect(d, IntegrationRegion(std::vector<Interval>(d.dimension(), Interval{-w, w})));
}

FunctionalValue truncated_entropy(const Density& d, double w, std::optional<double> tol) {
  return entropy_over(d, sup_norm_ball(d, w), tol);
}

FunctionalValue truncated_relative_entropy_to_gn(const Density& d, double w, const ClassSpec& spec,
                                                 std::optional<double> tol) {
  if (d.dimension() != spec.dimension) {
    throw std::invalid_argument("density dimension does not match the class dimension");
  }
  require_integrable_dim(d);
  const IntegrationRegion region = sup_norm_ball(d, w);
  if (region.empty()) return {};

  const double n = static_cast<double>(spec.dimension);
  const double cm = std::max(spec.m, 1.0);
  const double ref_v = std::pow(cm, spec.alpha / n) * spec.v;
  const double log_peak = std::log(generalized_normal_peak(spec.dimension, spec.alpha, ref_v));
  const double rate = n / (spec.alpha * ref_v);
  const double alpha = spec.alpha;

  return run(
      [&](std::span<const double> y) {
        const double qv = d(y);
        if (qv <= 1e-300) return 0.0;
        const double log_ref = log_peak - rate * alpha_norm_pow(y, alpha);
        return qv * (std::log(qv) - log_ref);
      },
      region, resolve_tol(tol, d.dimension()));
}

XlogxGap xlogx_gap(double x, double y) {
  constexpr double kInvE = 1.0 / std::numbers::e;
  if (!(x >= 0.0 && x <= kInvE) || !(y >= 0.0 && y <= kInvE)) {
    throw std::invalid_argument("xlogx_gap arguments must lie in [0, 1/e]");
  }
  const double diff = std::abs(x - y);
  XlogxGap g;
  g.lhs = std::abs(xlogx(x) - xlogx(y));
  g.rhs = diff == 0.0 ? 0.0 : -diff * std::log(diff);
  return g;
}

}  // namespace entropic
