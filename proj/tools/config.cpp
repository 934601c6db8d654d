#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lognl::cli {

namespace {

std::string type_name(const json& v) {
  return std::string(v.type_name());
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

}  // namespace

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": malformed JSON (" + msg + ")");
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

Obj::Obj(const json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (!j_.is_object()) bad(where_, "expected an object, got " + type_name(j_));
}

void Obj::allow(std::initializer_list<const char*> keys) const {
  for (const auto& [k, v] : j_.items()) {
    const bool known =
        std::any_of(keys.begin(), keys.end(), [&k = k](const char* a) { return k == a; });
    if (!known) bad(where_, "unknown key '" + k + "'");
  }
}

const json& Obj::at(const char* key) const {
  const auto it = j_.find(key);
  if (it == j_.end()) bad(where_, std::string("missing key '") + key + "'");
  return *it;
}

const json& Obj::raw(const char* key) const { return at(key); }

double Obj::num(const char* key) const {
  const json& v = at(key);
  if (!v.is_number()) bad(where_, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double Obj::num(const char* key, double fallback) const { return has(key) ? num(key) : fallback; }

int Obj::integer(const char* key) const {
  const json& v = at(key);
  if (!v.is_number_integer()) bad(where_, std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

int Obj::integer(const char* key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool Obj::flag(const char* key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_boolean()) bad(where_, std::string("'") + key + "' must be true or false");
  return v.get<bool>();
}

std::string Obj::str(const char* key) const {
  const json& v = at(key);
  if (!v.is_string()) bad(where_, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::string Obj::str(const char* key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

std::vector<double> Obj::nums(const char* key) const {
  const json& v = at(key);
  if (!v.is_array()) bad(where_, std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) bad(where_, std::string("'") + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Point Obj::point(const char* key, int dim) const {
  const auto v = nums(key);
  if (static_cast<int>(v.size()) != dim)
    bad(where_, std::string("'") + key + "' must have " + std::to_string(dim) + " entries");
  Point p{};
  for (int k = 0; k < dim; ++k) p[k] = v[k];
  return p;
}

Obj Obj::child(const char* key) const { return Obj(at(key), where_ + "." + key); }

Domain parse_domain(const Obj& o) {
  const std::string shape = o.str("shape");
  if (shape == "interval") {
    o.allow({"shape", "bounds"});
    const auto b = o.nums("bounds");
    if (b.size() != 2) bad(o.where(), "'bounds' must be [a, b]");
    return Domain::interval(b[0], b[1]);
  }
  if (shape == "ball") {
    o.allow({"shape", "center", "radius"});
    const auto c = o.nums("center");
    if (c.empty() || c.size() > 2) bad(o.where(), "'center' must have 1 or 2 entries");
    const int dim = static_cast<int>(c.size());
    return Domain::ball(o.point("center", dim), o.num("radius"), dim);
  }
  if (shape == "box") {
    o.allow({"shape", "lo", "hi"});
    const auto lo = o.nums("lo");
    if (lo.empty() || lo.size() > 2) bad(o.where(), "'lo' must have 1 or 2 entries");
    const int dim = static_cast<int>(lo.size());
    return Domain::box(o.point("lo", dim), o.point("hi", dim), dim);
  }
  bad(o.where(), "unknown shape '" + shape + "' (interval, ball, box)");
}

QuadratureConfig parse_quadrature(const Obj& parent) {
  QuadratureConfig cfg;
  if (!parent.has("quadrature")) return cfg;
  const Obj q = parent.child("quadrature");
  q.allow({"n_radial", "n_angular", "r_min", "mode"});
  cfg.n_radial = q.integer("n_radial", cfg.n_radial);
  cfg.n_angular = q.integer("n_angular", cfg.n_angular);
  cfg.r_min = q.num("r_min", cfg.r_min);
  const std::string mode = q.str("mode", "fast");
  if (mode == "fast") {
    cfg.mode = QuadMode::Fast;
  } else if (mode == "oracle") {
    cfg.mode = QuadMode::Oracle;
  } else {
    bad(q.where(), "mode must be 'fast' or 'oracle'");
  }
  cfg.validate();
  return cfg;
}

FieldFunction parse_rhs(const Obj& o, int dim) {
  const std::string name = o.str("name");
  if (name == "const") {
    o.allow({"name", "value"});
    return constant_field(o.num("value", 1.0));
  }
  if (name == "zero") {
    o.allow({"name"});
    return constant_field(0.0);
  }
  if (name == "linear") {
    o.allow({"name", "offset", "slope"});
    return linear_field(o.num("offset", 0.0), o.point("slope", dim));
  }
  if (name == "quadratic") {
    o.allow({"name"});
    return quadratic_field();
  }
  if (name == "gaussian") {
    o.allow({"name", "sigma"});
    return gaussian_field(o.num("sigma"));
  }
  if (name == "ell_profile") {
    o.allow({"name", "alpha"});
    return ell_profile_field(o.num("alpha"));
  }
  bad(o.where(), "unknown field '" + name + "'");
}

KernelSpec parse_kernel(const std::string& name, int N) {
  try {
    return make_kernel(name, N);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Argument || e.kind() == ErrorKind::Unsupported)
      throw ConfigError(std::string("kernel: ") + e.what());
    throw;
  }
}

ProblemSpec parse_problem(const Obj& root, const Domain& domain) {
  const int N = domain.dim();
  const Obj op = root.child("operator");
  const std::string kind = op.str("kind");
  const FieldFunction rhs = root.has("rhs") ? parse_rhs(root.child("rhs"), N) : constant_field(1.0);
  ProblemSpec p;
  if (kind == "generic") {
    op.allow({"kind", "kernel"});
    p = ProblemSpec::generic(parse_kernel(op.str("kernel", "unit"), N), domain, rhs);
  } else if (kind == "loglap") {
    op.allow({"kind"});
    p = ProblemSpec::loglap(domain, rhs);
  } else if (kind == "schrodinger") {
    op.allow({"kind"});
    if (N > 3) bad(op.where(), "schrodinger supports N <= 3");
    p = ProblemSpec::schrodinger(domain, rhs);
  } else {
    bad(op.where(), "unknown operator kind '" + kind + "' (generic, loglap, schrodinger)");
  }
  if (root.has("perturbation")) {
    const Obj t = root.child("perturbation");
    t.allow({"identity", "loglap_tail"});
    p.T.identity = t.num("identity", 0.0);
    const bool tail = t.flag("loglap_tail", false);
    if (tail && p.op != OperatorKind::Generic)
      bad(t.where(), "loglap_tail applies to the generic operator only");
    p.T.loglap_tail = p.T.loglap_tail || tail;
  }
  return p;
}

}  // namespace lognl::cli
