#include "entropic/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace entropic {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  std::string kind;  // density, spec, pair, options
  std::string name;
  int line = 0;
  std::map<std::string, Entry> fields;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void syntax(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> out;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') syntax(line_no, "unterminated section header");
      const auto header = trim(line.substr(1, line.size() - 2));
      Section s;
      s.line = line_no;
      if (header == "options") {
        s.kind = "options";
      } else {
        const auto dot = header.find('.');
        if (dot == std::string_view::npos) syntax(line_no, "unknown section '" + std::string(header) + "'");
        s.kind = std::string(header.substr(0, dot));
        s.name = std::string(header.substr(dot + 1));
        if (s.kind != "density" && s.kind != "spec" && s.kind != "pair") {
          syntax(line_no, "unknown section kind '" + s.kind + "'");
        }
        if (!valid_name(s.name)) syntax(line_no, "invalid name '" + s.name + "'");
      }
      const std::string key = s.kind + "." + s.name;
      if (!seen.insert(key).second) syntax(line_no, "duplicate section [" + std::string(header) + "]");
      out.push_back(std::move(s));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) syntax(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) syntax(line_no, "missing key");
    if (value.empty()) syntax(line_no, "missing value for '" + key + "'");
    if (out.empty()) syntax(line_no, "'" + key + "' appears before any section");
    if (!out.back().fields.emplace(key, Entry{value, line_no}).second) {
      syntax(line_no, "duplicate key '" + key + "'");
    }
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const Section& s) : s_(s) {}

  std::string where() const {
    return s_.kind == "options" ? std::string("[options]") : "[" + s_.kind + "." + s_.name + "]";
  }

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ConfigError(where() + " field '" + field + "': " + what);
  }

  bool has(const std::string& key) const { return s_.fields.count(key) != 0; }

  const Entry& raw(const std::string& key) const {
    const auto it = s_.fields.find(key);
    if (it == s_.fields.end()) throw ConfigError(where() + " is missing field '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  std::string text(const std::string& key) const { return raw(key).value; }

  double number(const std::string& key) const {
    const auto& e = raw(key);
    double x = 0.0;
    const auto* end = e.value.data() + e.value.size();
    const auto res = std::from_chars(e.value.data(), end, x);
    if (res.ec != std::errc() || res.ptr != end) {
      syntax(e.line, "field '" + key + "' is not a number: '" + e.value + "'");
    }
    return x;
  }

  double positive(const std::string& key) const {
    const double x = number(key);
    if (!(x > 0.0) || !std::isfinite(x)) fail(key, "must be a positive finite number");
    return x;
  }

  std::uint64_t integer(const std::string& key) const {
    const auto& e = raw(key);
    std::uint64_t x = 0;
    const auto* end = e.value.data() + e.value.size();
    const auto res = std::from_chars(e.value.data(), end, x);
    if (res.ec != std::errc() || res.ptr != end) {
      syntax(e.line, "field '" + key + "' is not a non-negative integer: '" + e.value + "'");
    }
    return x;
  }

  std::size_t dimension(const std::string& key) const {
    const auto n = integer(key);
    if (n < 1) fail(key, "must be at least 1");
    return static_cast<std::size_t>(n);
  }

  void reject_unused() const {
    for (const auto& [key, entry] : s_.fields) {
      if (!used_.count(key)) syntax(entry.line, "unknown field '" + key + "' in " + where());
    }
  }

 private:
  const Section& s_;
  mutable std::set<std::string> used_;
};

ClassSpec read_spec(const Reader& r) {
  const double alpha = r.positive("alpha");
  const double v = r.positive("v");
  const double m = r.positive("m");
  const std::size_t n = r.dimension("n");
  r.reject_unused();
  return ClassSpec(alpha, v, m, n);
}

}  // namespace

const Density& RunConfig::density(const std::string& name) const {
  const auto it = densities.find(name);
  if (it == densities.end()) throw ConfigError("unknown density '" + name + "'");
  return it->second;
}

const ClassSpec& RunConfig::spec(const std::string& name) const {
  const auto it = specs.find(name);
  if (it == specs.end()) throw ConfigError("unknown spec '" + name + "'");
  return it->second;
}

const PairDecl& RunConfig::pair(const std::string& name) const {
  for (const auto& p : pairs) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown pair '" + name + "'");
}

OutputFormat parse_format(std::string_view s) {
  if (s == "text") return OutputFormat::text;
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw ConfigError("format must be text, json or csv, got '" + std::string(s) + "'");
}

RunConfig parse_config(std::string_view text) {
  const auto sections = split_sections(text);
  RunConfig cfg;

  std::map<std::string, const Section*> density_sections;
  for (const auto& s : sections) {
    if (s.kind == "density") {
      density_sections[s.name] = &s;
      cfg.density_order.push_back(s.name);
    }
  }

  // Densities may refer to each other in any order; resolve depth-first.
  std::set<std::string> in_progress;
  std::function<const Density&(const std::string&, const Reader*, const std::string&)> resolve;
  resolve = [&](const std::string& name, const Reader* from, const std::string& field) -> const Density& {
    if (const auto it = cfg.densities.find(name); it != cfg.densities.end()) return it->second;
    const auto sit = density_sections.find(name);
    if (sit == density_sections.end()) {
      if (from) from->fail(field, "unknown density '" + name + "'");
      throw ConfigError("unknown density '" + name + "'");
    }
    if (!in_progress.insert(name).second) {
      throw ConfigError("[density." + name + "] refers to itself through '" + field + "'");
    }
    const Reader r(*sit->second);
    const std::string kind = r.text("kind");
    auto build = [&]() -> Density {
      try {
        if (kind == "uniform") {
          const double a = r.number("a");
          const double b = r.number("b");
          if (!(b > a)) r.fail("b", "must exceed a");
          return uniform(a, b);
        }
        if (kind == "normal") {
          const double mu = r.number("mu");
          return normal(mu, r.positive("sigma"));
        }
        if (kind == "laplace") {
          const double mu = r.number("mu");
          return laplace(mu, r.positive("b"));
        }
        if (kind == "gen_normal") {
          const std::size_t n = r.dimension("n");
          const double alpha = r.positive("alpha");
          return generalized_normal(n, alpha, r.positive("v"));
        }
        if (kind == "counterexample_p") return counterexample_p();
        if (kind == "counterexample_q") return counterexample_q();
        if (kind == "scaled") {
          const Density& base = resolve(r.text("base"), &r, "base");
          return scale(base, r.positive("c"));
        }
        if (kind == "product") {
          const Density& base = resolve(r.text("base"), &r, "base");
          if (base.dimension() != 1) r.fail("base", "must be one-dimensional");
          return iid_product(base, r.dimension("n"));
        }
        if (kind == "convolve") {
          const Density& a = resolve(r.text("first"), &r, "first");
          const Density& b = resolve(r.text("second"), &r, "second");
          if (a.dimension() != 1 || b.dimension() != 1) r.fail("first", "convolution needs one-dimensional factors");
          return convolve(a, b);
        }
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(r.where() + ": " + ex.what());
      }
      syntax(r.raw("kind").line, "unknown density kind '" + kind + "'");
    };
    Density d = build();
    r.reject_unused();
    in_progress.erase(name);
    return cfg.densities.emplace(name, std::move(d)).first->second;
  };

  for (const auto& name : cfg.density_order) (void)resolve(name, nullptr, "");

  for (const auto& s : sections) {
    const Reader r(s);
    if (s.kind == "spec") {
      cfg.spec_order.push_back(s.name);
      cfg.specs.emplace(s.name, read_spec(r));
    }
  }

  for (const auto& s : sections) {
    const Reader r(s);
    if (s.kind == "pair") {
      PairDecl p{s.name, r.text("x"), r.text("y"), std::nullopt, std::nullopt};
      if (r.has("spec")) p.spec = r.text("spec");
      if (r.has("tv")) {
        const double tv = r.number("tv");
        if (!(tv >= 0.0 && tv <= 2.0)) r.fail("tv", "must lie in [0, 2]");
        p.tv = tv;
      }
      r.reject_unused();
      if (!cfg.densities.count(p.x)) r.fail("x", "unknown density '" + p.x + "'");
      if (!cfg.densities.count(p.y)) r.fail("y", "unknown density '" + p.y + "'");
      const auto nx = cfg.densities.at(p.x).dimension();
      const auto ny = cfg.densities.at(p.y).dimension();
      if (nx != ny) {
        r.fail("y", "dimension " + std::to_string(ny) + " does not match dimension " + std::to_string(nx) + " of '" +
                        p.x + "'");
      }
      if (p.spec) {
        const auto it = cfg.specs.find(*p.spec);
        if (it == cfg.specs.end()) r.fail("spec", "unknown spec '" + *p.spec + "'");
        if (it->second.dimension != nx) r.fail("spec", "class dimension does not match the densities");
      }
      cfg.pairs.push_back(std::move(p));
    } else if (s.kind == "options") {
      if (r.has("tol")) cfg.tol = r.positive("tol");
      if (r.has("format")) {
        try {
          cfg.format = parse_format(r.text("format"));
        } catch (const ConfigError& ex) {
          r.fail("format", ex.what());
        }
      }
      if (r.has("out")) cfg.out = r.text("out");
      if (r.has("seed")) cfg.seed = r.integer("seed");
      if (r.has("samples")) cfg.samples = static_cast<std::size_t>(r.integer("samples"));
      r.reject_unused();
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace entropic
