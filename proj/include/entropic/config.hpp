#pragma once

// Run configuration: a flat key = value document with sections
// [density.NAME], [spec.NAME], [pair.NAME] and [options]. '#' starts a
// comment.
//
//   [density.g]            kind = gen_normal, n, alpha, v
//   kind = uniform         a, b
//   kind = normal          mu, sigma
//   kind = laplace         mu, b
//   kind = counterexample_p | counterexample_q
//   kind = scaled          base, c
//   kind = product         base, n
//   kind = convolve        first, second
//
//   [spec.s]     alpha, v, m, n
//   [pair.p]     x, y, optional spec, optional tv (closed-form L1 distance)
//   [options]    tol, format (text | json | csv), out, seed, samples

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "entropic/density.hpp"

namespace entropic {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { text, json, csv };

struct PairDecl {
  std::string name;
  std::string x;
  std::string y;
  std::optional<std::string> spec;
  std::optional<double> tv;  // closed-form L1 distance, cross-checked by verify
};

struct RunConfig {
  std::vector<std::string> density_order;  // declaration order
  std::map<std::string, Density> densities;
  std::vector<std::string> spec_order;
  std::map<std::string, ClassSpec> specs;
  std::vector<PairDecl> pairs;

  std::optional<double> tol;
  OutputFormat format = OutputFormat::text;
  std::optional<std::string> out;
  std::uint64_t seed = 0;
  std::size_t samples = 10000;

  [[nodiscard]] const Density& density(const std::string& name) const;
  [[nodiscard]] const ClassSpec& spec(const std::string& name) const;
  [[nodiscard]] const PairDecl& pair(const std::string& name) const;
};

/// Throws ConfigError; syntax errors carry "line N", semantic errors name
/// the section and field.
[[nodiscard]] RunConfig parse_config(std::string_view text);

[[nodiscard]] RunConfig load_config(const std::string& path);

[[nodiscard]] OutputFormat parse_format(std::string_view s);

}  // namespace entropic
