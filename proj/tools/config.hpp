#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lognl/geometry.hpp"
#include "lognl/kernels.hpp"
#include "lognl/nonlocal_eval.hpp"
#include "lognl/quadrature.hpp"
#include "lognl/solver.hpp"

namespace lognl::cli {

using json = nlohmann::json;

/// Malformed or invalid configuration; the front-end exits with code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads and parses a JSON document. Syntax errors report line and column.
json load_json(const std::string& path);
json parse_json(const std::string& text, const std::string& origin);

/// Typed, strict view of a JSON object: `allow` rejects keys outside the
/// schema, accessors throw ConfigError on missing keys or wrong types.
class Obj {
 public:
  Obj(const json& j, std::string where);

  void allow(std::initializer_list<const char*> keys) const;
  bool has(const char* key) const { return j_.contains(key); }
  const std::string& where() const { return where_; }

  double num(const char* key) const;
  double num(const char* key, double fallback) const;
  int integer(const char* key) const;
  int integer(const char* key, int fallback) const;
  bool flag(const char* key, bool fallback) const;
  std::string str(const char* key) const;
  std::string str(const char* key, const std::string& fallback) const;
  std::vector<double> nums(const char* key) const;
  Point point(const char* key, int dim) const;
  Obj child(const char* key) const;
  const json& raw(const char* key) const;

 private:
  const json& at(const char* key) const;

  const json& j_;
  std::string where_;
};

Domain parse_domain(const Obj& o);
QuadratureConfig parse_quadrature(const Obj& parent);
FieldFunction parse_rhs(const Obj& o, int dim);
KernelSpec parse_kernel(const std::string& name, int N);

/// The "operator", "perturbation" and "rhs" entries applied to a domain.
ProblemSpec parse_problem(const Obj& root, const Domain& domain);

}  // namespace lognl::cli
