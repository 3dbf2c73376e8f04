// Command-line front end. Exit codes: 0 ok, 1 verification failure,
// 2 non-member or hypothesis violated, 3 inconclusive, 4 usage or config error.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entropic/bounds.hpp"
#include "entropic/config.hpp"
#include "entropic/functionals.hpp"
#include "entropic/verify.hpp"
#include "json.hpp"

using namespace entropic;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kRejected = 2;
constexpr int kInconclusive = 3;
constexpr int kUsage = 4;

struct Options {
  std::string config_path;
  std::optional<double> tol;
  std::string format;
  std::string out;
  std::optional<std::uint64_t> seed;
};

struct Context {
  RunConfig cfg;
  OutputFormat format = OutputFormat::text;
  std::optional<std::string> out;
  std::optional<double> tol;
  std::uint64_t seed = 0;
};

Context make_context(const Options& o) {
  Context c;
  if (!o.config_path.empty()) c.cfg = load_config(o.config_path);
  c.format = o.format.empty() ? c.cfg.format : parse_format(o.format);
  c.out = o.out.empty() ? c.cfg.out : std::optional<std::string>(o.out);
  c.tol = o.tol ? o.tol : c.cfg.tol;
  c.seed = o.seed ? *o.seed : c.cfg.seed;
  return c;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string full(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return {buf, res.ptr};
}

json num(double x) {
  if (std::isfinite(x)) return x;
  return full(x);
}

void write_output(const Context& c, const std::string& body) {
  if (!c.out) {
    std::cout << body;
    return;
  }
  std::ofstream f(*c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + *c.out + "'");
  f << body;
}

// Emits one record in the chosen format. `rows` are (key, value) in order.
void emit(const Context& c, const std::string& text, const std::vector<std::pair<std::string, json>>& rows) {
  if (c.format == OutputFormat::text) {
    write_output(c, text);
  } else if (c.format == OutputFormat::json) {
    json j = json::object();
    for (const auto& [k, v] : rows) j[k] = v;
    write_output(c, j.dump(2) + "\n");
  } else {
    std::string s = "key,value\n";
    for (const auto& [k, v] : rows) s += k + "," + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    write_output(c, s);
  }
}

ClassSpec resolve_spec(const Context& c, const std::string& name) {
  if (name.find(',') == std::string::npos) return c.cfg.spec(name);
  std::vector<double> parts;
  std::stringstream ss(name);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    double x = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw ConfigError("spec '" + name + "' is not alpha,v,m,n");
    }
    parts.push_back(x);
  }
  if (parts.size() != 4 || parts[3] < 1 || parts[3] != std::floor(parts[3])) {
    throw ConfigError("spec '" + name + "' is not alpha,v,m,n");
  }
  try {
    return ClassSpec(parts[0], parts[1], parts[2], static_cast<std::size_t>(parts[3]));
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
}

int cmd_entropy(const Context& c, const std::string& name) {
  const auto& d = c.cfg.density(name);
  const auto h = differential_entropy(d, c.tol);
  if (!h.converged) {
    std::cerr << "entropy of '" << name << "' did not converge (divergent or heavy-tailed integral); "
              << "for the counterexample densities use the 'counterexample' subcommand\n";
    return kInconclusive;
  }
  emit(c, fixed6(h.value) + " +/- " + sci(h.error_estimate) + "\n",
       {{"density", d.name()}, {"entropy", num(h.value)}, {"error_estimate", num(h.error_estimate)}});
  return kOk;
}

int cmd_moment(const Context& c, const std::string& name, double alpha) {
  const auto& d = c.cfg.density(name);
  const auto m = alpha_moment(d, alpha, c.tol);
  if (!m.converged) {
    std::cerr << "alpha-moment of '" << name << "' did not converge (divergent or heavy-tailed integral)\n";
    return kInconclusive;
  }
  emit(c, fixed6(m.value) + " +/- " + sci(m.error_estimate) + "\n",
       {{"density", d.name()}, {"alpha", alpha}, {"moment", num(m.value)}, {"error_estimate", num(m.error_estimate)}});
  return kOk;
}

int cmd_sup(const Context& c, const std::string& name) {
  const auto& d = c.cfg.density(name);
  const auto s = ess_sup(d);
  emit(c, fixed6(s.value) + " (" + to_string(s.method) + ")\n",
       {{"density", d.name()}, {"ess_sup", num(s.value)}, {"method", to_string(s.method)}});
  return kOk;
}

int cmd_tv(const Context& c, const std::string& pair) {
  const auto& p = c.cfg.pair(pair);
  const auto& x = c.cfg.density(p.x);
  const auto& y = c.cfg.density(p.y);
  const auto tv = total_variation(x, y, c.tol);
  if (!tv.converged) {
    std::cerr << "L1 distance for '" << pair << "' did not converge\n";
    return kInconclusive;
  }
  std::string text = fixed6(tv.value) + " +/- " + sci(tv.error_estimate) + "\n";
  std::vector<std::pair<std::string, json>> rows{
      {"pair", pair}, {"tv", num(tv.value)}, {"error_estimate", num(tv.error_estimate)}};
  if (!p.spec) {
    emit(c, text, rows);
    return kOk;
  }

  // With a class attached, also check the continuity bound at this distance.
  const auto& spec = c.cfg.spec(*p.spec);
  int code = kOk;
  try {
    const auto b = check_continuity_bound(x, y, spec, c.tol);
    rows.emplace_back("lhs", num(b.lhs));
    rows.emplace_back("rhs", num(b.rhs));
    rows.emplace_back("margin", num(b.margin));
    rows.emplace_back("satisfied", b.satisfied);
    text += "continuity bound " + std::string(b.satisfied ? "satisfied" : "violated") + ": |h(x) - h(y)| " +
            full(b.lhs) + " <= " + full(b.rhs) + " (margin " + full(b.margin) + ")\n";
    code = !b.converged ? kInconclusive : (b.satisfied ? kOk : kFailed);
  } catch (const HypothesisViolated& ex) {
    text += std::string("hypothesis violated: ") + ex.what() + "\n";
    rows.emplace_back("hypothesis_violated", true);
    code = kRejected;
  } catch (const NotInClass& ex) {
    text += std::string("not in class: ") + ex.what() + "\n";
    rows.emplace_back("membership", to_string(ex.report().verdict));
    code = ex.report().verdict == Membership::inconclusive ? kInconclusive : kRejected;
  }
  emit(c, text, rows);
  return code;
}

int cmd_kl(const Context& c, const std::string& pair) {
  const auto& p = c.cfg.pair(pair);
  FunctionalValue d;
  try {
    d = relative_entropy(c.cfg.density(p.x), c.cfg.density(p.y), c.tol);
  } catch (const std::invalid_argument& ex) {
    std::cerr << ex.what() << " (relative entropy is +inf)\n";
    return kRejected;
  }
  if (!d.converged) {
    std::cerr << "relative entropy for '" << pair << "' did not converge\n";
    return kInconclusive;
  }
  emit(c, fixed6(d.value) + " +/- " + sci(d.error_estimate) + "\n",
       {{"pair", pair}, {"kl", num(d.value)}, {"error_estimate", num(d.error_estimate)}});
  return kOk;
}

int cmd_constants(const Context& c, const std::string& spec_name) {
  const auto k = theorem_constants(resolve_spec(c, spec_name));
  std::string text = "c1 " + full(k.c1) + "\nc2 " + full(k.c2) + "\nentropy_bound " + full(k.entropy_bound) +
                     "\nb1 " + full(k.b1) + "\n";
  emit(c, text,
       {{"alpha", k.spec.alpha},
        {"v", k.spec.v},
        {"m", k.spec.m},
        {"n", k.spec.dimension},
        {"c1", num(k.c1)},
        {"c2", num(k.c2)},
        {"entropy_bound", num(k.entropy_bound)},
        {"b1", num(k.b1)}});
  return kOk;
}

int cmd_check(const Context& c, const std::string& name, const std::string& spec_name) {
  const auto& d = c.cfg.density(name);
  const auto spec = resolve_spec(c, spec_name);
  const auto mem = check_membership(d, spec, c.tol);

  std::vector<std::pair<std::string, json>> rows{{"density", d.name()},
                                                  {"alpha_moment", num(mem.alpha_moment.value)},
                                                  {"moment_converged", mem.alpha_moment.converged},
                                                  {"ess_sup", num(mem.ess_sup.value)},
                                                  {"sup_method", to_string(mem.ess_sup.method)},
                                                  {"margin_v", num(mem.margin_v)},
                                                  {"margin_m", num(mem.margin_m)},
                                                  {"membership", to_string(mem.verdict)},
                                                  {"diagnostic", mem.diagnostic}};
  const std::string moment_text = mem.alpha_moment.converged
                                      ? full(mem.alpha_moment.value) + " (margin " + full(mem.margin_v) + ")"
                                      : std::string("not converged");
  std::string text = "membership " + std::string(to_string(mem.verdict)) + ": alpha-moment " + moment_text +
                     ", ess-sup " +
                     full(mem.ess_sup.value) + " [" + to_string(mem.ess_sup.method) + "] (margin " +
                     full(mem.margin_m) + ")\n";
  if (!mem.diagnostic.empty()) text += "  " + mem.diagnostic + "\n";

  int code = mem.verdict == Membership::non_member ? kRejected : kInconclusive;
  if (mem.belongs()) {
    const auto b = check_entropy_bound(d, spec, c.tol, mem);
    rows.emplace_back("lhs", num(b.lhs));
    rows.emplace_back("rhs", num(b.rhs));
    rows.emplace_back("margin", num(b.margin));
    rows.emplace_back("satisfied", b.satisfied);
    text += "entropy bound " + std::string(b.satisfied ? "satisfied" : "violated") + ": |h| " + full(b.lhs) +
            " <= " + full(b.rhs) + " (margin " + full(b.margin) + ")\n";
    code = !b.converged ? kInconclusive : (b.satisfied ? kOk : kFailed);
  }
  emit(c, text, rows);
  return code;
}

int cmd_verify(const Context& c, const std::string& scenario) {
  VerificationReport r;
  if (scenario == "theorem") {
    TheoremMatrix m;
    if (c.cfg.specs.empty()) {
      m = default_theorem_matrix();
    } else {
      for (const auto& n : c.cfg.density_order) m.densities.push_back(c.cfg.density(n));
      for (const auto& n : c.cfg.spec_order) m.specs.push_back(c.cfg.spec(n));
      for (const auto& p : c.cfg.pairs) {
        if (p.spec) m.pairs.push_back({p.name, c.cfg.density(p.x), c.cfg.density(p.y), c.cfg.spec(*p.spec), p.tv});
      }
    }
    r = run_theorem_suite(m, c.tol);
  } else if (scenario == "proof") {
    r = run_proof_suite(c.tol);
  } else if (scenario == "lemma2") {
    r = lemma2_sweep(c.cfg.samples, c.seed);
  } else if (scenario == "counterexamples") {
    r = run_counterexample_suite();
  } else if (scenario == "propagation") {
    r = run_propagation_suite(c.tol);
  } else {
    throw ConfigError("unknown scenario '" + scenario + "'");
  }

  std::string body;
  switch (c.format) {
    case OutputFormat::text:
      body = to_text(r);
      break;
    case OutputFormat::json:
      body = to_json(r);
      break;
    case OutputFormat::csv:
      body = to_csv(r);
      break;
  }
  write_output(c, body);
  if (c.out) {
    std::printf("%s: %zu passed, %zu failed, %zu inconclusive, %zu skipped; report written to %s\n",
                r.scenario.c_str(), r.passed, r.failed, r.inconclusive, r.skipped, c.out->c_str());
  }
  if (r.failed) return kFailed;
  return r.inconclusive ? kInconclusive : kOk;
}

int cmd_counterexample(const Context& c, const std::string& which, const std::vector<double>& logs) {
  std::vector<SweepRow> rows;
  std::string param;
  if (which == "p") {
    std::vector<double> w;
    for (double l : logs.empty() ? std::vector<double>{1, std::numbers::e, 4, 10, 30, 100} : logs) {
      w.push_back(std::exp(l));
    }
    rows = divergence_sweep_p(w);
    param = "log_w";
  } else if (which == "q") {
    std::vector<double> eps;
    for (double l : logs.empty() ? std::vector<double>{1, 2, 3, 4, 5} : logs) eps.push_back(std::exp(-std::exp(l)));
    rows = divergence_sweep_q(eps);
    param = "log_log_inv_eps";
  } else {
    throw ConfigError("counterexample must be 'p' or 'q'");
  }

  auto label = [&](const SweepRow& r) { return which == "p" ? std::log(r.param) : std::log(-std::log(r.param)); };
  std::string body;
  if (c.format == OutputFormat::json) {
    json j = json::array();
    for (const auto& r : rows) {
      j.push_back({{param, label(r)},
                   {"truncated_entropy", num(r.value)},
                   {"error_estimate", num(r.error_estimate)},
                   {"converged", r.converged},
                   {"closed_form", r.closed_form ? num(*r.closed_form) : json(nullptr)}});
    }
    body = j.dump(2) + "\n";
  } else if (c.format == OutputFormat::csv) {
    body = param + ",truncated_entropy,error_estimate,converged,closed_form\n";
    for (const auto& r : rows) {
      body += full(label(r)) + "," + full(r.value) + "," + full(r.error_estimate) + "," +
              (r.converged ? "true" : "false") + "," + (r.closed_form ? full(*r.closed_form) : "") + "\n";
    }
  } else {
    for (const auto& r : rows) {
      body += param + " " + full(label(r)) + ": " + full(r.value) + " +/- " + sci(r.error_estimate);
      if (r.closed_form) body += " (closed form " + full(*r.closed_form) + ")";
      body += "\n";
    }
  }
  write_output(c, body);
  for (const auto& r : rows) {
    if (!r.converged) return kInconclusive;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy bounds and continuity checks for (alpha, v, m) density classes"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config_path, "Run configuration file")->check(CLI::ExistingFile);
  app.add_option("--tol", o.tol, "Absolute quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", o.out, "Write output to this path");
  app.add_option("--seed", o.seed, "Random seed for sampled scenarios");

  std::string density, spec, pair, scenario, which;
  double alpha = 2.0;
  std::vector<double> logs;

  auto* entropy = app.add_subcommand("entropy", "Differential entropy of a density");
  entropy->add_option("density", density)->required();
  auto* moment = app.add_subcommand("moment", "Alpha-moment of a density");
  moment->add_option("density", density)->required();
  moment->add_option("--alpha", alpha, "Moment order")->check(CLI::PositiveNumber);
  auto* sup = app.add_subcommand("sup", "Essential supremum of a density");
  sup->add_option("density", density)->required();
  auto* tv = app.add_subcommand("tv", "L1 distance of a pair");
  tv->add_option("pair", pair)->required();
  auto* kl = app.add_subcommand("kl", "Relative entropy of a pair");
  kl->add_option("pair", pair)->required();
  auto* check = app.add_subcommand("check", "Class membership and entropy bound");
  check->add_option("density", density)->required();
  check->add_option("spec", spec, "Spec name or alpha,v,m,n")->required();
  auto* constants = app.add_subcommand("constants", "Theorem constants of a class");
  constants->add_option("spec", spec, "Spec name or alpha,v,m,n")->required();
  auto* verify = app.add_subcommand("verify", "Run a verification scenario");
  verify->add_option("scenario", scenario)
      ->required()
      ->check(CLI::IsMember({"theorem", "proof", "lemma2", "counterexamples", "propagation"}));
  auto* counter = app.add_subcommand("counterexample", "Truncated-entropy sweep for a counterexample density");
  counter->add_option("which", which, "p or q")->required()->check(CLI::IsMember({"p", "q"}));
  counter->add_option("--log", logs, "log w (p) or log(-log eps) (q) grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const Context c = make_context(o);
    if (entropy->parsed()) return cmd_entropy(c, density);
    if (moment->parsed()) return cmd_moment(c, density, alpha);
    if (sup->parsed()) return cmd_sup(c, density);
    if (tv->parsed()) return cmd_tv(c, pair);
    if (kl->parsed()) return cmd_kl(c, pair);
    if (check->parsed()) return cmd_check(c, density, spec);
    if (constants->parsed()) return cmd_constants(c, spec);
    if (verify->parsed()) return cmd_verify(c, scenario);
    if (counter->parsed()) return cmd_counterexample(c, which, logs);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconclusive;
  }
  return kUsage;
}
