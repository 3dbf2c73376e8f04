#include "entropic/verify.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

#include "entropic/special.hpp"

namespace entropic {

namespace {

using std::numbers::e;
using Clock = std::chrono::steady_clock;

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string spec_str(const ClassSpec& s) {
  return "(" + g(s.alpha) + "," + g(s.v) + "," + g(s.m) + "," + std::to_string(s.dimension) + ")";
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Inequality lhs <= rhs, accepted within `tolerance`.
ReportItem inequality(std::string id, std::string kind, double lhs, double rhs, double tolerance, bool converged) {
  ReportItem it;
  it.id = std::move(id);
  it.kind = std::move(kind);
  it.lhs = lhs;
  it.rhs = rhs;
  it.margin = rhs - lhs;
  it.tolerance = tolerance;
  if (!converged || !std::isfinite(lhs) || !std::isfinite(rhs)) {
    it.verdict = Verdict::inconclusive;
    it.reason = "an underlying integral did not converge";
  } else {
    it.verdict = it.margin >= -tolerance ? Verdict::pass : Verdict::fail;
  }
  return it;
}

// Equality lhs == rhs within `tolerance`.
ReportItem equality(std::string id, std::string kind, double lhs, double rhs, double tolerance, bool converged) {
  ReportItem it = inequality(std::move(id), std::move(kind), lhs, rhs, tolerance, converged);
  if (it.verdict != Verdict::inconclusive) {
    it.verdict = std::abs(it.margin) <= tolerance ? Verdict::pass : Verdict::fail;
  }
  return it;
}

ReportItem skipped(std::string id, std::string kind, std::string reason) {
  ReportItem it;
  it.id = std::move(id);
  it.kind = std::move(kind);
  it.verdict = Verdict::skipped;
  it.reason = std::move(reason);
  return it;
}

ReportItem membership_item(std::string id, const Density& d, const ClassSpec& spec, std::optional<double> tol) {
  const auto r = check_membership(d, spec, tol);
  ReportItem it;
  it.id = std::move(id);
  it.kind = "membership";
  it.lhs = r.alpha_moment.value;
  it.rhs = spec.v;
  it.margin = r.margin_v;
  it.tolerance = r.alpha_moment.error_estimate;
  it.verdict = r.verdict == Membership::member       ? Verdict::pass
               : r.verdict == Membership::non_member ? Verdict::fail
                                                     : Verdict::inconclusive;
  it.reason = "sup " + g(r.ess_sup.value) + " (" + to_string(r.ess_sup.method) + ") vs m " + g(spec.m);
  if (!r.diagnostic.empty()) it.reason += "; " + r.diagnostic;
  return it;
}

// Runs independent items concurrently and keeps declared order.
template <class Task>
std::vector<ReportItem> run_all(const std::vector<Task>& tasks) {
  std::vector<std::future<ReportItem>> futures;
  futures.reserve(tasks.size());
  for (const auto& t : tasks) futures.push_back(std::async(std::launch::async, t));
  std::vector<ReportItem> out;
  out.reserve(tasks.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

std::string csv_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return {buf, res.ptr};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json json_num(double x) {
  if (std::isfinite(x)) return x;
  return csv_num(x);
}

// Closed-form L1 distances for the shift and dilation families.
double tv_normal_shift(double shift, double sigma) {
  return 2.0 * (2.0 * normal_cdf(std::abs(shift) / (2.0 * sigma)) - 1.0);
}
double tv_uniform_dilation(double narrow, double wide) { return 2.0 * (1.0 - narrow / wide); }
double tv_uniform_shift(double shift, double width) { return 2.0 * std::min(1.0, std::abs(shift) / width); }
double tv_laplace_shift(double shift, double b) { return 2.0 * (1.0 - std::exp(-std::abs(shift) / (2.0 * b))); }

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
    case Verdict::skipped:
      return "skipped";
  }
  return "?";
}

void VerificationReport::add(ReportItem item) {
  switch (item.verdict) {
    case Verdict::pass:
      ++passed;
      break;
    case Verdict::fail:
      ++failed;
      break;
    case Verdict::inconclusive:
      ++inconclusive;
      break;
    case Verdict::skipped:
      ++skipped;
      break;
  }
  items.push_back(std::move(item));
}

void VerificationReport::append(const VerificationReport& other) {
  for (const auto& it : other.items) add(it);
  runtime_seconds += other.runtime_seconds;
}

std::string to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["passed"] = r.passed;
  j["failed"] = r.failed;
  j["inconclusive"] = r.inconclusive;
  j["skipped"] = r.skipped;
  j["runtime_seconds"] = r.runtime_seconds;
  j["items"] = nlohmann::json::array();
  for (const auto& it : r.items) {
    nlohmann::json x{{"id", it.id},
                     {"kind", it.kind},
                     {"lhs", json_num(it.lhs)},
                     {"rhs", json_num(it.rhs)},
                     {"margin", json_num(it.margin)},
                     {"tolerance", json_num(it.tolerance)},
                     {"verdict", to_string(it.verdict)},
                     {"reason", it.reason}};
    x["delta"] = it.delta ? json_num(*it.delta) : nlohmann::json(nullptr);
    x["w"] = it.w ? json_num(*it.w) : nlohmann::json(nullptr);
    j["items"].push_back(std::move(x));
  }
  return j.dump(2) + "\n";
}

std::string to_csv(const VerificationReport& r) {
  std::string out = "scenario,id,kind,lhs,rhs,margin,tolerance,delta,w,verdict,reason\n";
  for (const auto& it : r.items) {
    out += csv_field(r.scenario) + ',' + csv_field(it.id) + ',' + csv_field(it.kind) + ',' + csv_num(it.lhs) + ',' +
           csv_num(it.rhs) + ',' + csv_num(it.margin) + ',' + csv_num(it.tolerance) + ',' +
           (it.delta ? csv_num(*it.delta) : "") + ',' + (it.w ? csv_num(*it.w) : "") + ',' + to_string(it.verdict) +
           ',' + csv_field(it.reason) + '\n';
  }
  return out;
}

std::string to_text(const VerificationReport& r) {
  std::ostringstream os;
  for (const auto& it : r.items) {
    os << '[' << to_string(it.verdict) << "] " << it.kind << ' ' << it.id;
    if (it.verdict != Verdict::skipped) {
      os << ": lhs " << csv_num(it.lhs) << " rhs " << csv_num(it.rhs) << " margin " << csv_num(it.margin);
    }
    if (it.delta) os << " delta " << csv_num(*it.delta);
    if (it.w) os << " w " << csv_num(*it.w);
    if (!it.reason.empty()) os << " (" << it.reason << ')';
    os << '\n';
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s: %zu passed, %zu failed, %zu inconclusive, %zu skipped in %.2f s\n",
                r.scenario.c_str(), r.passed, r.failed, r.inconclusive, r.skipped, r.runtime_seconds);
  os << buf;
  return os.str();
}

TheoremMatrix default_theorem_matrix() {
  TheoremMatrix m;
  m.densities = {uniform(0, 1),
                 scale(uniform(0, 1), 2.0),
                 uniform(-1, 1),
                 uniform(-0.75, 0.75),
                 normal(0.1, 0.9),
                 normal(0.5, 0.8),
                 normal(-0.3, 0.7),
                 generalized_normal(1, 0.5, 1.07),
                 generalized_normal(1, 1, 1),
                 generalized_normal(1, 2, 0.9),
                 generalized_normal(1, 4, 1),
                 laplace(0.2, 0.6),
                 convolve(uniform(-1, 1), uniform(-1, 1)),
                 scale(normal(0, 1), 0.8),
                 counterexample_p(),
                 iid_product(normal(0, 1), 2),
                 iid_product(uniform(0, 1), 2),
                 generalized_normal(2, 2, 3),
                 generalized_normal(2, 1, 1.5),
                 iid_product(laplace(0, 0.5), 2)};
  m.specs = {ClassSpec(2, 1, 1, 1), ClassSpec(1, 2, 1, 1), ClassSpec(2, 4, 2, 1), ClassSpec(2, 4, 2, 2)};

  const ClassSpec g(2, 1.2, 0.5, 1);
  const ClassSpec a(2, 2, 1, 1);
  const ClassSpec b(2, 4, 1, 1);
  const ClassSpec d(2, 2, 1.5, 1);
  const ClassSpec c(2, 4, 2, 2);
  m.pairs = {
      {"gauss-shift-0.1", normal(0, 1), normal(0.1, 1), g, tv_normal_shift(0.1, 1)},
      {"gauss-shift-0.3", normal(0, 1), normal(0.3, 1), g, tv_normal_shift(0.3, 1)},
      {"gauss-shift-0.5", normal(0, 0.8), normal(0.5, 0.8), a, tv_normal_shift(0.5, 0.8)},
      {"gauss-shift-0.6", normal(-0.2, 0.7), normal(0.4, 0.7), a, tv_normal_shift(0.6, 0.7)},
      {"uniform-dilation-1.1", uniform(0, 1), uniform(0, 1.1), d, tv_uniform_dilation(1, 1.1)},
      {"uniform-dilation-1.5", uniform(0, 1), uniform(0, 1.5), d, tv_uniform_dilation(1, 1.5)},
      {"uniform-dilation-1.2", uniform(-1, 1), uniform(-1.2, 1.2), a, tv_uniform_dilation(1, 1.2)},
      {"uniform-dilation-3/2", uniform(0, 2), uniform(0, 3), b, tv_uniform_dilation(2, 3)},
      {"uniform-shift-0.5", uniform(0, 2), uniform(0.5, 2.5), b, tv_uniform_shift(0.5, 2)},
      {"uniform-shift-boundary", uniform(-1, 1), uniform(0, 2), b, tv_uniform_shift(1, 2)},
      {"laplace-shift-0.3", laplace(0, 0.6), laplace(0.3, 0.6), a, tv_laplace_shift(0.3, 0.6)},
      {"gauss2-shift-0.3", iid_product(normal(0, 1), 2), iid_product(normal(0.3, 1), 2), c,
       tv_normal_shift(0.3 * std::numbers::sqrt2, 1)},
      {"gauss-shift-5-rejected", normal(0, 1), normal(5, 1), ClassSpec(2, 30, 1, 1), tv_normal_shift(5, 1)},
  };
  return m;
}

VerificationReport run_theorem_suite(const TheoremMatrix& matrix, std::optional<double> tol) {
  const auto start = Clock::now();
  std::vector<DensityCase> cases;
  for (const auto& d : matrix.densities) {
    for (const auto& s : matrix.specs) {
      if (s.dimension == d.dimension()) cases.push_back({d, s});
    }
  }
  cases.insert(cases.end(), matrix.extra.begin(), matrix.extra.end());

  std::vector<std::function<ReportItem()>> tasks;
  for (const auto& c : cases) {
    tasks.emplace_back([c, tol] {
      const std::string id = c.density.name() + " in " + spec_str(c.spec);
      const auto mem = check_membership(c.density, c.spec, tol);
      if (mem.verdict == Membership::non_member) return skipped(id, "entropy_bound", "not a member: " + mem.diagnostic);
      if (mem.verdict == Membership::inconclusive) {
        ReportItem it = skipped(id, "entropy_bound", "membership inconclusive: " + mem.diagnostic);
        it.verdict = Verdict::inconclusive;
        return it;
      }
      const auto b = check_entropy_bound(c.density, c.spec, tol, mem);
      ReportItem it = inequality(id, "entropy_bound", b.lhs, b.rhs, b.tolerance, b.converged);
      if (it.reason.empty()) it.reason = b.context;
      return it;
    });
  }
  for (const auto& p : matrix.pairs) {
    tasks.emplace_back([p, tol] {
      const std::string kind = "continuity_bound";
      for (const Density* d : {&p.x, &p.y}) {
        const auto mem = check_membership(*d, p.spec, tol);
        if (mem.verdict == Membership::non_member) {
          return skipped(p.id, kind, "'" + d->name() + "' not a member: " + mem.diagnostic);
        }
        if (mem.verdict == Membership::inconclusive) {
          ReportItem it = skipped(p.id, kind, "'" + d->name() + "' membership inconclusive: " + mem.diagnostic);
          it.verdict = Verdict::inconclusive;
          return it;
        }
      }
      BoundCheck b;
      try {
        b = check_continuity_bound(p.x, p.y, p.spec, tol, true);
      } catch (const HypothesisViolated& ex) {
        ReportItem it = skipped(p.id, kind, std::string("hypothesis violated: ") + ex.what());
        if (p.tv_oracle) it.delta = *p.tv_oracle;
        return it;
      }
      ReportItem it = inequality(p.id, kind, b.lhs, b.rhs, b.tolerance, b.converged);
      it.delta = b.delta;
      it.reason = b.context;
      if (p.tv_oracle && b.delta) {
        const double gap = std::abs(*b.delta - *p.tv_oracle);
        if (gap > 1e-7) {
          it.verdict = Verdict::fail;
          it.reason = "L1 distance " + g(*b.delta) + " disagrees with closed form " + g(*p.tv_oracle);
        } else {
          it.reason += "; L1 closed form " + csv_num(*p.tv_oracle);
        }
      }
      return it;
    });
  }

  VerificationReport r;
  r.scenario = "theorem";
  for (auto& it : run_all(tasks)) r.add(std::move(it));
  r.runtime_seconds = seconds_since(start);
  return r;
}

double counterexample_p_truncated_entropy(double w) {
  if (!(w > e)) return 0.0;
  const double y = std::log(w);
  return std::log(y) + 2.0 * (1.0 - (1.0 + std::log(y)) / y);
}

std::vector<SweepRow> divergence_sweep_p(const std::vector<double>& w_grid) {
  const auto p = counterexample_p();
  std::vector<SweepRow> rows;
  for (double w : w_grid) {
    if (!(w > 0.0) || std::log(w) > kCounterexampleLogCutoff) {
      throw std::invalid_argument("w must lie in (0, e^" + g(kCounterexampleLogCutoff) + "]");
    }
    // Absolute tolerance relative to the size of the answer.
    const double target = counterexample_p_truncated_entropy(w);
    const auto h = truncated_entropy(p, w, 1e-10 * std::max(1.0, std::abs(target)));
    rows.push_back({w, h.value, h.error_estimate, h.converged, target});
  }
  return rows;
}

std::vector<SweepRow> divergence_sweep_q(const std::vector<double>& eps_grid) {
  const auto q = counterexample_q();
  const double top = std::exp(-e);
  std::vector<SweepRow> rows;
  for (double eps : eps_grid) {
    if (!(eps > 0.0) || -std::log(eps) > kCounterexampleLogCutoff) {
      throw std::invalid_argument("eps must lie in [e^-" + g(kCounterexampleLogCutoff) + ", e^-e]");
    }
    SweepRow row{eps, 0.0, 0.0, true, std::nullopt};
    if (eps < top) {
      const auto h = entropy_over(q, IntegrationRegion({Interval{eps, top}}), 1e-10);
      row.value = h.value;
      row.error_estimate = h.error_estimate;
      row.converged = h.converged;
    }
    rows.push_back(row);
  }
  return rows;
}

VerificationReport run_counterexample_suite() {
  const auto start = Clock::now();
  VerificationReport r;
  r.scenario = "counterexamples";

  const std::vector<double> w_grid{e, std::exp(e), std::exp(4.0), std::exp(10.0), std::exp(30.0), std::exp(100.0)};
  const auto prow = divergence_sweep_p(w_grid);
  for (std::size_t i = 0; i < prow.size(); ++i) {
    const auto& row = prow[i];
    ReportItem it = equality("p: log w = " + g(std::log(row.param)), "closed_form", row.value, *row.closed_form, 1e-6,
                             row.converged);
    it.w = row.param;
    r.add(std::move(it));
    if (i > 0) {
      const auto& prev = prow[i - 1];
      // Strict increase: prev < current.
      ReportItem inc = inequality("p: Delta_w increases to log w = " + g(std::log(row.param)), "monotone",
                                  prev.value, row.value, 0.0, prev.converged && row.converged);
      if (inc.verdict == Verdict::pass && !(row.value > prev.value)) inc.verdict = Verdict::fail;
      inc.w = row.param;
      r.add(std::move(inc));
    }
  }

  const std::vector<double> eps_grid{std::exp(-e), std::exp(-std::exp(2.0)), std::exp(-std::exp(3.0)),
                                     std::exp(-std::exp(4.0)), std::exp(-std::exp(5.0))};
  const auto qrow = divergence_sweep_q(eps_grid);
  for (std::size_t i = 1; i < qrow.size(); ++i) {
    const auto& row = qrow[i];
    const auto& prev = qrow[i - 1];
    // Each step must lose more than one nat: current + 1 < prev.
    ReportItem it = inequality("q: log(-log eps) = " + g(std::log(-std::log(row.param))), "decrease_gt_1",
                               row.value + 1.0, prev.value, 0.0, row.converged && prev.converged);
    if (it.verdict == Verdict::pass && !(row.value + 1.0 < prev.value)) it.verdict = Verdict::fail;
    it.w = row.param;
    it.reason = "truncated entropy " + csv_num(row.value) + " after " + csv_num(prev.value);
    r.add(std::move(it));
  }
  r.runtime_seconds = seconds_since(start);
  return r;
}

VerificationReport proof_replication(const Density& d, const ClassSpec& spec, const std::vector<double>& w_grid,
                                     std::optional<double> tol) {
  const auto start = Clock::now();
  VerificationReport r;
  r.scenario = "proof";
  const std::string tag = d.name() + " in " + spec_str(spec);

  const auto mem = check_membership(d, spec, tol);
  if (!mem.belongs()) {
    for (double w : w_grid) {
      ReportItem it = skipped(tag, "proof", std::string("membership ") + to_string(mem.verdict) + ": " + mem.diagnostic);
      it.w = w;
      r.add(std::move(it));
    }
    r.runtime_seconds = seconds_since(start);
    return r;
  }

  const double n = static_cast<double>(spec.dimension);
  const double cm = std::max(spec.m, 1.0);
  const auto q = scale(d, std::pow(cm, 1.0 / n));
  const auto consts = theorem_constants(spec);
  const double log_coeff = (n / spec.alpha) * std::log(consts.b1) + std::log(cm);
  const double moment_coeff = n / (std::pow(cm, spec.alpha / n) * spec.v * spec.alpha);
  const double delta_cap = (n / spec.alpha) * std::abs(std::log(consts.b1)) + std::log(cm) + n / spec.alpha + 1.0;

  std::vector<std::function<std::vector<ReportItem>()>> tasks;
  for (double w : w_grid) {
    tasks.emplace_back([=, &q] {
      const auto region = sup_norm_ball(q, w);
      const auto dw = truncated_entropy(q, w, tol);
      const auto pw = mass_over(q, region, tol);
      const auto mw = moment_over(q, spec.alpha, region, tol);
      const auto th = truncated_relative_entropy_to_gn(q, w, spec, tol);
      const std::string id = tag + " w=" + g(w);
      std::vector<ReportItem> items;

      const double rhs = log_coeff * pw.value + moment_coeff * mw.value - th.value;
      items.push_back(equality(id, "identity", dw.value, rhs, 1e-6,
                               dw.converged && pw.converged && mw.converged && th.converged));
      items.push_back(inequality(id, "theta_lower", -1.0, th.value, 1e-8, th.converged));
      items.push_back(inequality(id, "delta_upper", dw.value, delta_cap, 1e-8, dw.converged));

      bool covers = true;
      for (const auto& iv : q.support()) covers = covers && iv.lo >= -w && iv.hi <= w;
      if (covers) {
        const auto h = differential_entropy(q, tol);
        items.push_back(equality(id, "full_support", dw.value, h.value, 1e-6, dw.converged && h.converged));
      }
      for (auto& it : items) it.w = w;
      return items;
    });
  }
  std::vector<std::future<std::vector<ReportItem>>> futures;
  for (const auto& t : tasks) futures.push_back(std::async(std::launch::async, t));
  for (auto& f : futures) {
    for (auto& it : f.get()) r.add(std::move(it));
  }
  r.runtime_seconds = seconds_since(start);
  return r;
}

VerificationReport run_proof_suite(std::optional<double> tol) {
  const auto start = Clock::now();
  const std::vector<double> w_grid{0.5, 1.0, 2.0, 5.0, 10.0};
  const std::vector<DensityCase> cases{
      {generalized_normal(1, 2, 0.9), ClassSpec(2, 1, 1, 1)},
      {uniform(0, 1), ClassSpec(2, 1, 2, 1)},
      {laplace(0.2, 0.6), ClassSpec(1, 2, 2, 1)},
      {iid_product(normal(0, 1), 2), ClassSpec(2, 4, 2, 2)},
  };
  VerificationReport r;
  r.scenario = "proof";
  for (const auto& c : cases) r.append(proof_replication(c.density, c.spec, w_grid, tol));
  r.runtime_seconds = seconds_since(start);
  return r;
}

VerificationReport lemma2_sweep(std::size_t sample_count, std::uint64_t seed) {
  const auto start = Clock::now();
  VerificationReport r;
  r.scenario = "lemma2";
  const double inv_e = 1.0 / e;

  for (const auto& [x, y] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {inv_e, 0.0}, {inv_e, inv_e}}) {
    const auto gap = xlogx_gap(x, y);
    const std::string id = "(" + csv_num(x) + "," + csv_num(y) + ")";
    r.add(inequality(id, "boundary", gap.lhs, gap.rhs, 1e-12, true));
  }
  {
    const auto gap = xlogx_gap(inv_e, 0.0);
    r.add(equality("(1/e,0)", "equality", gap.lhs, gap.rhs, 1e-15, true));
  }

  if (sample_count > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pick(0.0, inv_e);
    double worst = -kInf;
    XlogxGap worst_gap{};
    std::pair<double, double> worst_at{};
    std::size_t violations = 0;
    for (std::size_t i = 0; i < sample_count; ++i) {
      const double x = pick(rng);
      const double y = pick(rng);
      const auto gap = xlogx_gap(x, y);
      const double excess = gap.lhs - gap.rhs;
      if (excess > 1e-12) ++violations;
      if (excess > worst) {
        worst = excess;
        worst_gap = gap;
        worst_at = {x, y};
      }
    }
    ReportItem it = inequality("random pairs", "sweep", worst_gap.lhs, worst_gap.rhs, 1e-12, true);
    it.reason = std::to_string(sample_count) + " pairs, seed " + std::to_string(seed) + ", " +
                std::to_string(violations) + " violations; tightest at (" + csv_num(worst_at.first) + "," +
                csv_num(worst_at.second) + ")";
    r.add(std::move(it));
  }
  r.runtime_seconds = seconds_since(start);
  return r;
}

VerificationReport run_propagation_suite(std::optional<double> tol) {
  const auto start = Clock::now();
  std::vector<std::function<ReportItem()>> tasks;

  const std::vector<DensityCase> members{
      {uniform(0, 1), ClassSpec(2, 1, 2, 1)},
      {normal(0, 1), ClassSpec(2, 1.2, 0.5, 1)},
      {normal(0.5, 0.8), ClassSpec(2, 2, 1, 1)},
      {laplace(0.2, 0.6), ClassSpec(1, 1, 1, 1)},
      {generalized_normal(1, 0.5, 1), ClassSpec(0.5, 1.2, 2, 1)},
      {generalized_normal(1, 4, 1), ClassSpec(4, 1.5, 1, 1)},
      {iid_product(normal(0, 1), 2), ClassSpec(2, 4, 2, 2)},
      {generalized_normal(2, 1, 1.5), ClassSpec(1, 2, 0.5, 2)},
  };
  for (const auto& c : members) {
    tasks.emplace_back([c, tol] {
      const auto base = membership_item("base " + c.density.name() + " in " + spec_str(c.spec), c.density, c.spec, tol);
      if (base.verdict != Verdict::pass) return base;
      const double n = static_cast<double>(c.spec.dimension);
      const auto scaled = scale(c.density, std::pow(c.spec.m * e, 1.0 / n));
      const auto target = scaled_class_params(c.spec);
      return membership_item("scaled " + c.density.name() + " in " + spec_str(target), scaled, target, tol);
    });
  }

  struct Pair {
    Density x, y;
    ClassSpec spec;
  };
  const std::vector<Pair> pairs{
      {normal(0, 1), normal(0.3, 1), ClassSpec(2, 1.2, 0.5, 1)},
      {normal(0, 1), normal(1, 1), ClassSpec(2, 2.5, 0.5, 1)},
      {uniform(0, 1), uniform(0, 1.5), ClassSpec(2, 2, 1.5, 1)},
      {laplace(0, 0.6), laplace(0.3, 0.6), ClassSpec(2, 2, 1, 1)},
      {normal(-0.2, 0.7), normal(0.4, 0.7), ClassSpec(2, 2, 1, 1)},
  };
  for (const auto& p : pairs) {
    tasks.emplace_back([p, tol] {
      const std::string tag = "Z of " + p.x.name() + ", " + p.y.name();
      for (const Density* d : {&p.x, &p.y}) {
        auto base = membership_item(tag + ": base " + d->name(), *d, p.spec, tol);
        if (base.verdict != Verdict::pass) return base;
      }
      const double c = std::pow(p.spec.m * e, 1.0 / static_cast<double>(p.spec.dimension));
      const auto xs = scale(p.x, c);
      const auto ys = scale(p.y, c);
      const auto tv = total_variation(xs, ys, tol);
      if (!tv.converged) {
        ReportItem it = skipped(tag, "membership", "L1 distance did not converge");
        it.verdict = Verdict::inconclusive;
        return it;
      }
      const auto target = z_class_params(p.spec, tv.value);
      ReportItem it = membership_item(tag + " in " + spec_str(target), normalized_difference(xs, ys, tv.value), target,
                                      tol);
      it.delta = tv.value;
      return it;
    });
  }

  tasks.emplace_back([tol] {
    const ClassSpec su(2, 0.5, 1.5, 1);
    const auto u = uniform(0, 1);
    auto base = membership_item("sum: base " + u.name(), u, su, tol);
    if (base.verdict != Verdict::pass) return base;
    const auto target = sum_class_params(su, su);
    return membership_item("sum " + u.name() + " + " + u.name() + " in " + spec_str(target), convolve(u, u), target,
                           tol);
  });

  VerificationReport r;
  r.scenario = "propagation";
  for (auto& it : run_all(tasks)) r.add(std::move(it));
  r.runtime_seconds = seconds_since(start);
  return r;
}

}  // namespace entropic
