#include "entropic/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace entropic {

namespace {

// Kronrod 21-point abscissae; odd indices are the embedded 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745526680, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

// Finite pieces spanning more than this ratio of magnitudes are pre-split
// geometrically.
constexpr double kGeometricRatio = 64.0;

// Integrand sample: value plus an absolute error carried from an inner integral.
struct Sample {
  double value = 0.0;
  double carry = 0.0;
};

enum class MapKind { finite, lower_inf, upper_inf, whole_line };

struct Piece {
  MapKind kind = MapKind::finite;
  double anchor = 0.0;  // a for [a, inf), b for (-inf, b]
  double t0 = 0.0;
  double t1 = 0.0;
};

template <class F>
Sample eval_mapped(const F& f, const Piece& p, double t) {
  double x = t;
  double jac = 1.0;
  switch (p.kind) {
    case MapKind::finite:
      break;
    case MapKind::lower_inf: {
      const double u = 1.0 - t;
      x = p.anchor + t / u;
      jac = 1.0 / (u * u);
      break;
    }
    case MapKind::upper_inf: {
      const double u = 1.0 - t;
      x = p.anchor - t / u;
      jac = 1.0 / (u * u);
      break;
    }
    case MapKind::whole_line: {
      const double u = 1.0 - t * t;
      x = t / u;
      jac = (1.0 + t * t) / (u * u);
      break;
    }
  }
  if (!std::isfinite(x)) return {};
  Sample s = f(x);
  s.value *= jac;
  s.carry *= jac;
  return s;
}

struct Segment {
  std::size_t piece = 0;
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double carry = 0.0;

  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod(const F& f, const Piece& p, std::size_t piece_index, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  std::array<double, 11> fv1{};
  std::array<double, 11> fv2{};
  const Sample fc = eval_mapped(f, p, centr);
  double resg = 0.0;
  double resk = kWgk[10] * fc.value;
  double resabs = std::abs(resk);
  double carry = kWgk[10] * std::abs(fc.carry);

  for (std::size_t j = 0; j < 10; ++j) {
    const double absc = hlgth * kXgk[j];
    const Sample s1 = eval_mapped(f, p, centr - absc);
    const Sample s2 = eval_mapped(f, p, centr + absc);
    fv1[j] = s1.value;
    fv2[j] = s2.value;
    const double sum = s1.value + s2.value;
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(s1.value) + std::abs(s2.value));
    carry += kWgk[j] * (std::abs(s1.carry) + std::abs(s2.carry));
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[10] * std::abs(fc.value - reskh);
  for (std::size_t j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }

  Segment seg{piece_index, a, b, resk * hlgth, 0.0, carry * dhlgth};
  resabs *= dhlgth;
  resasc *= dhlgth;
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > kTiny / (50.0 * kEps)) err = std::max(kEps * 50.0 * resabs, err);
  if (!std::isfinite(err) || !std::isfinite(seg.value)) err = kInf;
  seg.error = err;
  return seg;
}

std::vector<Piece> build_pieces(const Interval& iv, const std::vector<double>& splits) {
  std::vector<double> bounds;
  bounds.reserve(splits.size() + 2);
  bounds.push_back(iv.lo);
  bounds.insert(bounds.end(), splits.begin(), splits.end());
  bounds.push_back(iv.hi);

  std::vector<Piece> pieces;
  if (bounds.size() == 2 && iv.lo == -kInf && iv.hi == kInf) {
    pieces.push_back({MapKind::whole_line, 0.0, -1.0, 1.0});
    return pieces;
  }
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    const double lo = bounds[i];
    const double hi = bounds[i + 1];
    if (!(hi > lo)) continue;
    if (lo == -kInf) {
      // (-inf, hi]: t in [0, 1) runs from hi outward.
      pieces.push_back({MapKind::upper_inf, hi, 0.0, 1.0});
    } else if (hi == kInf) {
      pieces.push_back({MapKind::lower_inf, lo, 0.0, 1.0});
    } else if (lo > 0.0 && hi / lo > kGeometricRatio) {
      // Wide positive range: cut at powers of two so that mass concentrated
      // near the small end cannot hide between the Kronrod nodes.
      double a = lo;
      while (a * 2.0 < hi) {
        pieces.push_back({MapKind::finite, 0.0, a, a * 2.0});
        a *= 2.0;
      }
      pieces.push_back({MapKind::finite, 0.0, a, hi});
    } else if (hi < 0.0 && lo / hi > kGeometricRatio) {
      double b = hi;
      while (b * 2.0 > lo) {
        pieces.push_back({MapKind::finite, 0.0, b * 2.0, b});
        b *= 2.0;
      }
      pieces.push_back({MapKind::finite, 0.0, lo, b});
    } else {
      pieces.push_back({MapKind::finite, 0.0, lo, hi});
    }
  }
  return pieces;
}

struct EngineResult {
  QuadratureResult result;
  double carry = 0.0;
};

// Global adaptive bisection. Stops once the rule error alone is <= own_tol;
// the reported error adds the carried inner error.
template <class F>
EngineResult adapt(const F& f, const Interval& iv, const std::vector<double>& splits, double own_tol,
                   std::size_t max_intervals) {
  EngineResult out;
  if (iv.empty()) return out;

  const auto pieces = build_pieces(iv, splits);
  std::priority_queue<Segment> heap;
  double total_err = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    Segment s = gauss_kronrod(f, pieces[i], i, pieces[i].t0, pieces[i].t1);
    total_err += s.error;
    heap.push(s);
  }

  std::size_t splits_done = 0;
  auto recompute = [&heap]() {
    // priority_queue has no iteration; copy is acceptable at the stopping check.
    auto copy = heap;
    double e = 0.0;
    while (!copy.empty()) {
      e += copy.top().error;
      copy.pop();
    }
    return e;
  };

  while (heap.size() < max_intervals) {
    if (total_err <= own_tol) {
      total_err = recompute();
      if (total_err <= own_tol) break;
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Piece& p = pieces[worst.piece];
    Segment left = gauss_kronrod(f, p, worst.piece, worst.a, mid);
    Segment right = gauss_kronrod(f, p, worst.piece, mid, worst.b);
    total_err += left.error + right.error - worst.error;
    if (!std::isfinite(total_err)) total_err = recompute();
    heap.push(left);
    heap.push(right);
    ++splits_done;
  }

  double value = 0.0;
  double err = 0.0;
  double carry = 0.0;
  // Sum small contributions first for a stable total.
  std::vector<Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(),
            [](const Segment& x, const Segment& y) { return std::abs(x.value) < std::abs(y.value); });
  for (const auto& s : segs) {
    value += s.value;
    err += s.error;
    carry += s.carry;
  }

  out.result.value = value;
  out.result.error_estimate = err + carry;
  out.result.subdivisions = splits_done;
  out.result.converged = std::isfinite(value) && err <= own_tol;
  out.carry = carry;
  return out;
}

void check_tol(const QuadratureOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (opts.max_intervals == 0) throw std::invalid_argument("quadrature interval budget must be positive");
}

// Recursive iterated integration over axes [axis, n).
QuadratureResult nested(const IntegrandND& f, const IntegrationRegion& region, std::size_t axis,
                        std::array<double, kMaxDimension>& point, double tol,
                        std::size_t max_intervals) {
  const std::size_t n = region.dimension();
  if (axis + 1 == n) {
    auto inner = [&](double x) {
      point[axis] = x;
      return Sample{f(std::span<const double>(point.data(), n)), 0.0};
    };
    return adapt(inner, region.axis(axis), region.splits(axis), tol, max_intervals).result;
  }

  bool inner_ok = true;
  const double inner_tol = tol * 1e-2;
  auto outer = [&](double x) {
    point[axis] = x;
    const QuadratureResult r = nested(f, region, axis + 1, point, inner_tol, max_intervals);
    if (!r.converged) inner_ok = false;
    return Sample{r.value, r.error_estimate};
  };
  EngineResult er = adapt(outer, region.axis(axis), region.splits(axis), 0.5 * tol, max_intervals);
  er.result.converged = er.result.converged && inner_ok && er.result.error_estimate <= tol;
  return er.result;
}

}  // namespace

IntegrationRegion::IntegrationRegion(std::vector<Interval> axes)
    : IntegrationRegion(std::move(axes), {}) {}

IntegrationRegion::IntegrationRegion(std::vector<Interval> axes,
                                     std::vector<std::vector<double>> splits)
    : axes_(std::move(axes)), splits_(std::move(splits)) {
  splits_.resize(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (std::isnan(axes_[i].lo) || std::isnan(axes_[i].hi)) {
      throw std::invalid_argument("integration region endpoint is NaN");
    }
    normalize(i);
  }
}

bool IntegrationRegion::empty() const {
  return std::any_of(axes_.begin(), axes_.end(), [](const Interval& iv) { return iv.empty(); });
}

void IntegrationRegion::add_split(std::size_t axis, double x) {
  splits_.at(axis).push_back(x);
  normalize(axis);
}

void IntegrationRegion::normalize(std::size_t axis) {
  auto& s = splits_[axis];
  const Interval iv = axes_[axis];
  std::erase_if(s, [&](double x) { return !(x > iv.lo && x < iv.hi) || !std::isfinite(x); });
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

QuadratureResult integrate(const Integrand1D& f, const IntegrationRegion& region,
                           const QuadratureOptions& opts) {
  check_tol(opts);
  if (region.dimension() != 1) throw std::invalid_argument("integrate expects a one-dimensional region");
  auto g = [&f](double x) { return Sample{f(x), 0.0}; };
  return adapt(g, region.axis(0), region.splits(0), opts.tol, opts.max_intervals).result;
}

QuadratureResult integrate(const Integrand1D& f, Interval iv, const QuadratureOptions& opts) {
  return integrate(f, IntegrationRegion({iv}), opts);
}

QuadratureResult integrate_nd(const IntegrandND& f, const IntegrationRegion& region,
                              const QuadratureOptions& opts) {
  check_tol(opts);
  const std::size_t n = region.dimension();
  if (n == 0 || n > kMaxDimension) {
    throw std::invalid_argument("integrate_nd supports dimensions 1 to 3, got " + std::to_string(n));
  }
  if (region.empty()) return {};
  std::array<double, kMaxDimension> point{};
  return nested(f, region, 0, point, opts.tol, opts.max_intervals);
}

double xlogx(double x) {
  if (x <= 1e-300) return 0.0;
  return x * std::log(x);
}

}  // namespace entropic
