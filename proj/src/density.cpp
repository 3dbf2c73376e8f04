#include "entropic/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

#include "entropic/special.hpp"

namespace entropic {

namespace {

using std::numbers::e;
using std::numbers::pi;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string num(std::size_t n) { return std::to_string(n); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Scratch point for transforms that remap coordinates before delegating.
class PointBuffer {
 public:
  explicit PointBuffer(std::size_t n) : n_(n) {
    if (n > small_.size()) large_.resize(n);
  }
  double* data() { return n_ > small_.size() ? large_.data() : small_.data(); }
  std::span<const double> view() { return {data(), n_}; }

 private:
  std::size_t n_;
  std::array<double, 8> small_{};
  std::vector<double> large_;
};

std::optional<double> sup_bound(const Density& d) {
  if (d.closed_forms().ess_sup) return d.closed_forms().ess_sup;
  return d.propagated_sup();
}

bool sup_exact(const Density& d) {
  return d.closed_forms().ess_sup.has_value() || d.propagated_sup_exact();
}

// Finite endpoints and split points of a one-dimensional density.
std::vector<double> breakpoints(const Density& d) {
  std::vector<double> pts = d.splits().at(0);
  const Interval iv = d.support().at(0);
  if (std::isfinite(iv.lo)) pts.push_back(iv.lo);
  if (std::isfinite(iv.hi)) pts.push_back(iv.hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

ClassSpec::ClassSpec(double alpha_, double v_, double m_, std::size_t dimension_)
    : alpha(alpha_), v(v_), m(m_), dimension(dimension_) {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be a positive finite number");
  require(v > 0.0 && std::isfinite(v), "v must be a positive finite number");
  require(m > 0.0 && std::isfinite(m), "m must be a positive finite number");
  require(dimension >= 1, "dimension must be at least 1");
}

const char* to_string(SupMethod m) {
  switch (m) {
    case SupMethod::closed_form:
      return "closed_form";
    case SupMethod::propagated:
      return "propagated";
    case SupMethod::grid_estimate:
      return "grid_estimate";
  }
  return "?";
}

Density::Density(Parts parts) {
  require(parts.dimension >= 1, "density dimension must be at least 1");
  require(static_cast<bool>(parts.eval), "density needs an evaluation rule");
  require(parts.support.size() == parts.dimension, "support must list one interval per axis");
  parts.splits.resize(parts.dimension);
  for (std::size_t i = 0; i < parts.dimension; ++i) {
    require(parts.support[i].hi > parts.support[i].lo, "support interval must be nonempty");
    auto& s = parts.splits[i];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  parts_ = std::make_shared<const Parts>(std::move(parts));
}

bool Density::in_support(std::span<const double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!parts_->support[i].contains(x[i])) return false;
  }
  return true;
}

double Density::operator()(std::span<const double> x) const {
  if (x.size() != parts_->dimension) {
    throw std::invalid_argument("point has length " + std::to_string(x.size()) + ", density '" +
                                parts_->name + "' has dimension " +
                                std::to_string(parts_->dimension));
  }
  if (!in_support(x)) return 0.0;
  return parts_->eval(x);
}

double Density::operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }

IntegrationRegion Density::region() const { return {parts_->support, parts_->splits}; }

Density uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform needs finite a < b");
  const double width = b - a;
  const double h = 1.0 / width;
  Density::Parts p;
  p.name = "uniform(" + num(a) + "," + num(b) + ")";
  p.eval = [h](std::span<const double>) { return h; };
  p.support = {{a, b}};
  if (a < 0.0 && b > 0.0) p.splits = {{0.0}};
  p.closed.entropy = std::log(width);
  p.closed.alpha_moment = [a, b, width](double alpha) -> std::optional<double> {
    auto prim = [alpha](double x) {
      return std::copysign(std::pow(std::abs(x), alpha + 1.0), x) / (alpha + 1.0);
    };
    return (prim(b) - prim(a)) / width;
  };
  p.closed.ess_sup = h;
  p.closed.note = "constant density 1/(b-a)";
  return Density(std::move(p));
}

Density normal(double mu, double sigma) {
  require(std::isfinite(mu), "normal mean must be finite");
  require(sigma > 0.0 && std::isfinite(sigma), "normal sigma must be positive");
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * pi));
  Density::Parts p;
  p.name = "normal(" + num(mu) + "," + num(sigma) + ")";
  p.eval = [=](std::span<const double> x) {
    const double z = (x[0] - mu) / sigma;
    return norm * std::exp(-0.5 * z * z);
  };
  p.support = {{-kInf, kInf}};
  p.splits = {{mu}};
  p.closed.entropy = 0.5 * std::log(2.0 * pi * e * sigma * sigma);
  p.closed.alpha_moment = [mu, sigma](double alpha) -> std::optional<double> {
    if (mu == 0.0) {
      return std::pow(sigma, alpha) * std::pow(2.0, alpha / 2.0) * gamma_fn((alpha + 1.0) / 2.0) /
             std::sqrt(pi);
    }
    if (alpha == 2.0) return mu * mu + sigma * sigma;
    if (alpha == 1.0) {
      return sigma * std::sqrt(2.0 / pi) * std::exp(-mu * mu / (2.0 * sigma * sigma)) +
             mu * (1.0 - 2.0 * normal_cdf(-mu / sigma));
    }
    return std::nullopt;
  };
  p.closed.ess_sup = norm;
  p.closed.note = "Gaussian: h = log(2 pi e sigma^2)/2";
  return Density(std::move(p));
}

Density laplace(double mu, double b) {
  require(std::isfinite(mu), "laplace location must be finite");
  require(b > 0.0 && std::isfinite(b), "laplace scale must be positive");
  Density::Parts p;
  p.name = "laplace(" + num(mu) + "," + num(b) + ")";
  p.eval = [=](std::span<const double> x) { return std::exp(-std::abs(x[0] - mu) / b) / (2.0 * b); };
  p.support = {{-kInf, kInf}};
  p.splits = {{mu}};
  p.closed.entropy = 1.0 + std::log(2.0 * b);
  p.closed.alpha_moment = [mu, b](double alpha) -> std::optional<double> {
    if (mu == 0.0) return std::pow(b, alpha) * gamma_fn(alpha + 1.0);
    if (alpha == 2.0) return 2.0 * b * b + mu * mu;
    if (alpha == 1.0) return std::abs(mu) + b * std::exp(-std::abs(mu) / b);
    return std::nullopt;
  };
  p.closed.ess_sup = 1.0 / (2.0 * b);
  p.closed.note = "Laplace: h = 1 + log(2b)";
  return Density(std::move(p));
}

double generalized_normal_peak(std::size_t n, double alpha, double v) {
  const double nd = static_cast<double>(n);
  const double one_axis = std::pow(nd / (alpha * v), 1.0 / alpha) / (2.0 * gamma_fn(1.0 / alpha + 1.0));
  return std::pow(one_axis, nd);
}

Density generalized_normal(std::size_t n, double alpha, double v) {
  require(n >= 1, "generalized normal dimension must be at least 1");
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  require(v > 0.0 && std::isfinite(v), "v must be positive");
  const double nd = static_cast<double>(n);
  const double rate = nd / (alpha * v);
  const double peak = generalized_normal_peak(n, alpha, v);
  const double scale_param = std::pow(alpha * v / nd, 1.0 / alpha);

  Density::Parts p;
  p.name = "gen_normal(" + num(n) + "," + num(alpha) + "," + num(v) + ")";
  p.dimension = n;
  p.eval = [=](std::span<const double> x) {
    double s = 0.0;
    for (double xi : x) s += std::pow(std::abs(xi), alpha);
    return peak * std::exp(-rate * s);
  };
  p.support.assign(n, Interval{-kInf, kInf});
  p.splits.assign(n, std::vector<double>{0.0});
  p.closed.entropy =
      nd / alpha + nd * std::log(2.0 * gamma_fn(1.0 + 1.0 / alpha) * std::pow(alpha * v / nd, 1.0 / alpha));
  p.closed.alpha_moment = [=](double beta) -> std::optional<double> {
    if (beta == alpha) return v;
    return nd * std::pow(scale_param, beta) * gamma_fn((beta + 1.0) / alpha) / gamma_fn(1.0 / alpha);
  };
  p.closed.ess_sup = peak;
  p.closed.note = "alpha-generalized normal; alpha-moment equals v";
  return Density(std::move(p));
}

Density counterexample_p() {
  Density::Parts p;
  p.name = "counterexample_p";
  p.eval = [](std::span<const double> x) {
    const double l = std::log(x[0]);
    return (1.0 / x[0]) / (l * l);
  };
  p.support = {{e, kInf}};
  p.closed.entropy = kInf;
  p.closed.alpha_moment = [](double) -> std::optional<double> { return kInf; };
  p.closed.ess_sup = 1.0 / e;
  p.closed.note = "heavy tail: every alpha-moment and the entropy diverge to +inf; sup 1/e at x = e";
  return Density(std::move(p));
}

Density counterexample_q() {
  Density::Parts p;
  p.name = "counterexample_q";
  p.eval = [](std::span<const double> x) {
    if (x[0] <= 0.0) return 0.0;
    const double l = -std::log(x[0]);
    const double ll = std::log(l);
    return 1.0 / (x[0] * l * ll * ll);
  };
  p.support = {{0.0, std::exp(-e)}};
  p.closed.entropy = -kInf;
  p.closed.ess_sup = kInf;
  p.closed.note = "unbounded at 0+: entropy diverges to -inf; moments finite (bounded support)";
  return Density(std::move(p));
}

Density scale(const Density& d, double c) {
  require(c > 0.0 && std::isfinite(c), "scale factor must be positive and finite");
  const std::size_t n = d.dimension();
  const double jac = std::pow(c, static_cast<double>(n));

  Density::Parts p;
  p.name = "scale(" + d.name() + "," + num(c) + ")";
  p.dimension = n;
  p.eval = [d, c, jac, n](std::span<const double> x) {
    PointBuffer y(n);
    for (std::size_t i = 0; i < n; ++i) y.data()[i] = x[i] / c;
    return d(y.view()) / jac;
  };
  for (const Interval& iv : d.support()) p.support.push_back({iv.lo * c, iv.hi * c});
  for (const auto& axis : d.splits()) {
    auto& out = p.splits.emplace_back();
    for (double s : axis) out.push_back(s * c);
  }
  const ClosedForms& base = d.closed_forms();
  if (base.entropy) p.closed.entropy = *base.entropy + static_cast<double>(n) * std::log(c);
  if (base.alpha_moment) {
    p.closed.alpha_moment = [m = base.alpha_moment, c](double alpha) -> std::optional<double> {
      auto v = m(alpha);
      if (!v) return std::nullopt;
      return std::pow(c, alpha) * *v;
    };
  }
  p.closed.note = "scaled by " + num(c) + ": entropy + n log c";
  if (auto s = sup_bound(d)) {
    p.propagated_sup = *s / jac;
    p.propagated_sup_exact = sup_exact(d);
  }
  return Density(std::move(p));
}

Density iid_product(const Density& component, std::size_t n) {
  require(component.dimension() == 1, "iid_product needs a one-dimensional component");
  require(n >= 1, "iid_product needs n >= 1");
  const double nd = static_cast<double>(n);

  Density::Parts p;
  p.name = "iid(" + component.name() + "," + num(n) + ")";
  p.dimension = n;
  p.eval = [component](std::span<const double> x) {
    double v = 1.0;
    for (double xi : x) {
      v *= component(xi);
      if (v == 0.0) break;
    }
    return v;
  };
  p.support.assign(n, component.support()[0]);
  p.splits.assign(n, component.splits()[0]);
  const ClosedForms& base = component.closed_forms();
  if (base.entropy) p.closed.entropy = nd * *base.entropy;
  if (base.alpha_moment) {
    p.closed.alpha_moment = [m = base.alpha_moment, nd](double alpha) -> std::optional<double> {
      auto v = m(alpha);
      if (!v) return std::nullopt;
      return nd * *v;
    };
  }
  p.closed.note = "product of identical factors: entropy n h";
  if (auto s = sup_bound(component)) {
    p.propagated_sup = std::pow(*s, nd);
    p.propagated_sup_exact = sup_exact(component);
  }
  return Density(std::move(p));
}

Density normalized_difference(const Density& px, const Density& py, double delta,
                              std::vector<double> crossings) {
  require(px.dimension() == py.dimension(), "normalized_difference needs equal dimensions");
  require(delta > 0.0 && std::isfinite(delta),
          "normalized_difference needs delta > 0 (delta = 0 means the densities agree a.e.)");
  const std::size_t n = px.dimension();

  Density::Parts p;
  p.name = "diff(" + px.name() + "," + py.name() + ")";
  p.dimension = n;
  p.eval = [px, py, delta](std::span<const double> x) { return std::abs(px(x) - py(x)) / delta; };
  for (std::size_t i = 0; i < n; ++i) {
    const Interval a = px.support()[i];
    const Interval b = py.support()[i];
    p.support.push_back({std::min(a.lo, b.lo), std::max(a.hi, b.hi)});
    auto& s = p.splits.emplace_back(px.splits()[i]);
    s.insert(s.end(), py.splits()[i].begin(), py.splits()[i].end());
    for (const Interval& iv : {a, b}) {
      if (std::isfinite(iv.lo)) s.push_back(iv.lo);
      if (std::isfinite(iv.hi)) s.push_back(iv.hi);
    }
  }
  if (n == 1) {
    auto found = sign_changes([&](double x) { return px(x) - py(x); }, p.support[0]);
    crossings.insert(crossings.end(), found.begin(), found.end());
    p.splits[0].insert(p.splits[0].end(), crossings.begin(), crossings.end());
  }
  p.closed.note = "|pX - pY| / delta";
  const auto sx = sup_bound(px);
  const auto sy = sup_bound(py);
  if (sx && sy) p.propagated_sup = (*sx + *sy) / delta;
  return Density(std::move(p));
}

Density convolve(const Density& d1, const Density& d2) {
  require(d1.dimension() == 1 && d2.dimension() == 1, "convolve needs one-dimensional densities");
  const Interval s1 = d1.support()[0];
  const Interval s2 = d2.support()[0];
  const auto b1 = breakpoints(d1);
  const auto b2 = breakpoints(d2);

  Density::Parts p;
  p.name = "conv(" + d1.name() + "," + d2.name() + ")";
  p.eval = [d1, d2, s1, s2, b1, b2](std::span<const double> xs) {
    const double x = xs[0];
    const Interval t_range{std::max(s1.lo, x - s2.hi), std::min(s1.hi, x - s2.lo)};
    if (t_range.empty()) return 0.0;
    std::vector<double> cuts = b1;
    for (double b : b2) cuts.push_back(x - b);
    const IntegrationRegion region({t_range}, {cuts});
    const auto r = integrate([&](double t) { return d1(t) * d2(x - t); }, region,
                             {.tol = 1e-12, .max_intervals = 4000});
    if (!r.converged) {
      throw EvaluationError("convolution integral did not converge at x = " + std::to_string(x));
    }
    return std::max(r.value, 0.0);
  };
  p.support = {{s1.lo + s2.lo, s1.hi + s2.hi}};
  auto& cuts = p.splits.emplace_back();
  for (double a : b1) {
    for (double b : b2) cuts.push_back(a + b);
  }
  p.closed.note = "convolution of independent summands";
  const auto sa = sup_bound(d1);
  const auto sb = sup_bound(d2);
  if (sa && sb) p.propagated_sup = std::min(*sa, *sb);
  return Density(std::move(p));
}

std::vector<double> sign_changes(const std::function<double(double)>& g, Interval iv,
                                 std::size_t samples) {
  // Sample uniformly in a compactified coordinate so infinite axes are covered.
  auto to_x = [iv](double t) {
    if (iv.finite()) return iv.lo + t * (iv.hi - iv.lo);
    if (iv.lo == -kInf && iv.hi == kInf) {
      const double s = 2.0 * t - 1.0;
      return s / (1.0 - s * s);
    }
    if (iv.hi == kInf) return iv.lo + t / (1.0 - t);
    return iv.hi - (1.0 - t) / t;
  };
  auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };

  std::vector<double> out;
  double prev_x = 0.0;
  int prev_sign = 0;
  for (std::size_t k = 1; k < samples; ++k) {
    const double x = to_x(static_cast<double>(k) / static_cast<double>(samples));
    if (!std::isfinite(x)) continue;
    const int s = sign(g(x));
    if (s == 0) continue;
    if (prev_sign != 0 && s != prev_sign) {
      double lo = prev_x;
      double hi = x;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (sign(g(mid)) == prev_sign) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev_sign = s;
    prev_x = x;
  }
  return out;
}

}  // namespace entropic
