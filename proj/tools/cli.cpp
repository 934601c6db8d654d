#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "lognl/barriers.hpp"
#include "lognl/error.hpp"
#include "lognl/kernels.hpp"
#include "lognl/logmod.hpp"
#include "lognl/nonlocal_eval.hpp"
#include "lognl/solver.hpp"
#include "output.hpp"

namespace lognl::cli {

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string report;
  std::string lemma;

  int N = 1;
  std::string op = "LK";
  std::string kernel = "unit";
  std::string field = "quadratic";
  std::vector<double> x{0.0};
  std::string mode = "fast";
  int n_radial = QuadratureConfig{}.n_radial;
  int n_angular = QuadratureConfig{}.n_angular;
  double r_min = QuadratureConfig{}.r_min;
  int index = 10;
};

/// Output sink: a file written atomically, or the stream when no path is set.
class Sink {
 public:
  Sink(std::string path, std::ostream& fallback) : path_(std::move(path)), fallback_(fallback) {
    if (!path_.empty()) ensure_writable(path_);
  }
  void emit(const std::string& text) const {
    if (path_.empty()) {
      fallback_ << text;
    } else {
      write_atomic(path_, text);
    }
  }
  bool to_file() const { return !path_.empty(); }

 private:
  std::string path_;
  std::ostream& fallback_;
};

json seed_of(const Obj& root) { return root.has("seed") ? json(root.integer("seed")) : json(0); }

json audit_json(const MaxPrincipleAudit& a) {
  return {{"applicable", a.applicable},
          {"pass", a.pass},
          {"max_violation", a.max_violation},
          {"tolerance", a.tolerance},
          {"sup_ratio", a.sup_ratio}};
}

json report_json(const SolveReport& r) {
  json j = {{"residual_inf", r.residual_inf},
            {"condition_estimate", r.condition_estimate},
            {"rcond", r.rcond},
            {"alternative", to_string(r.alternative)},
            {"mp_audit", audit_json(r.mp_audit)},
            {"h", r.h},
            {"nodes", r.nodes}};
  if (r.alternative == Alternative::NearSingular) j["kernel_vector"] = r.kernel_vector;
  return j;
}

CsvTable solution_table(const GridFunction& u) {
  CsvTable t;
  const int N = u.grid().dim();
  t.header = N == 1 ? std::vector<std::string>{"x1", "u"}
                    : std::vector<std::string>{"x1", "x2", "u"};
  for (std::size_t i = 0; i < u.grid().size(); ++i) {
    const Point& p = u.grid().node(i);
    if (N == 1) {
      t.rows.push_back({p[0], u[i]});
    } else {
      t.rows.push_back({p[0], p[1], u[i]});
    }
  }
  return t;
}

double positive(const Obj& o, const char* key) {
  const double v = o.num(key);
  if (!(v > 0.0)) throw ConfigError(o.where() + ": '" + key + "' must be positive");
  return v;
}

int cmd_constants(const Options& opt, std::ostream& out) {
  if (opt.N < 1) throw ConfigError("--N must be a positive dimension");
  const LogLapConstants c = loglap_constants(opt.N);
  out << render_json({{"c_N", c.c_N}, {"rho_N", c.rho_N}});
  return kOk;
}

int cmd_eval(const Options& opt, std::ostream& out) {
  const int N = opt.N;
  if (N < 1 || N > 2) throw ConfigError("--N must be 1 or 2 for pointwise evaluation");
  if (static_cast<int>(opt.x.size()) != N)
    throw ConfigError("--x must have " + std::to_string(N) + " comma-separated entries");
  QuadratureConfig cfg;
  cfg.n_radial = opt.n_radial;
  cfg.n_angular = opt.n_angular;
  cfg.r_min = opt.r_min;
  cfg.mode = opt.mode == "oracle" ? QuadMode::Oracle : QuadMode::Fast;
  cfg.validate();
  Point x{};
  for (int k = 0; k < N; ++k) x[k] = opt.x[static_cast<std::size_t>(k)];
  const FieldFunction u = parse_field(opt.field);
  EvalResult r;
  if (opt.op == "LK") {
    r = eval_LK(parse_kernel(opt.kernel, N), u, x, N, cfg);
  } else if (opt.op == "loglap") {
    r = eval_loglap(u, x, N, cfg);
  } else if (opt.op == "loglap_direct") {
    r = eval_loglap_direct(u, x, N, cfg);
  } else if (opt.op == "schrodinger") {
    r = eval_schrodinger(u, x, N, cfg);
  } else if (opt.op == "J") {
    r = eval_J_conv(u, x, N, cfg);
  } else {
    if (opt.index < 1) throw ConfigError("--index must be a positive integer");
    r = eval_remainder(mollify_kernel(parse_kernel(opt.kernel, N), opt.index, N), u, x, cfg);
  }
  out << render_json({{"value", r.value}, {"err_est", r.err_est}});
  return kOk;
}

int cmd_solve(const Options& opt, std::ostream& out, std::ostream& err) {
  const json doc = load_json(opt.config);
  const Obj root(doc, "config");
  root.allow({"domain", "operator", "perturbation", "rhs", "h", "quadrature", "seed"});
  const Domain domain = parse_domain(root.child("domain"));
  const ProblemSpec problem = parse_problem(root, domain);
  const QuadratureConfig cfg = parse_quadrature(root);
  const double h = positive(root, "h");
  const json seed = seed_of(root);
  const Sink sol(opt.out, out);
  const Sink rep(opt.report, out);

  const auto grid = build_grid(domain, h);
  const Solution s = solve_dirichlet(problem, grid, cfg);
  json report = report_json(s.report);
  report["domain"] = domain.describe();
  report["operator"] = to_string(problem.op);
  report["seed"] = seed;
  if (s.report.alternative == Alternative::NearSingular) {
    rep.emit(render_json(report));
    err << "[solver] near_singular: the discrete problem has a nontrivial kernel; "
           "kernel vector in the report\n";
    return kVerificationFailed;
  }
  if (sol.to_file()) sol.emit(solution_table(*s.u).render());
  rep.emit(render_json(report));
  if (s.report.mp_audit.applicable && !s.report.mp_audit.pass) {
    err << "[solver] maximum-principle audit failed: min u = " << -s.report.mp_audit.max_violation
        << "\n";
    return kVerificationFailed;
  }
  return kOk;
}

int cmd_converge(const Options& opt, std::ostream& out, std::ostream& err) {
  const json doc = load_json(opt.config);
  const Obj root(doc, "config");
  root.allow({"domain", "operator", "perturbation", "rhs", "h_list", "quadrature", "seed"});
  const Domain domain = parse_domain(root.child("domain"));
  const ProblemSpec problem = parse_problem(root, domain);
  const QuadratureConfig cfg = parse_quadrature(root);
  const std::vector<double> hs = root.nums("h_list");
  if (hs.size() < 3) throw ConfigError("config: 'h_list' needs at least 3 levels");
  const json seed = seed_of(root);
  const Sink csv(opt.out, out);
  const Sink rep(opt.report, out);

  const ConvergeReport r = converge(problem, hs, cfg);
  CsvTable t;
  t.header = {"h", "sup_diff"};
  json rows = json::array();
  bool decreasing = true;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    t.rows.push_back({r.rows[k].h, r.rows[k].sup_diff});
    rows.push_back({{"h", r.rows[k].h}, {"sup_diff", r.rows[k].sup_diff}});
    if (k > 0 && !(r.rows[k].sup_diff < r.rows[k - 1].sup_diff)) decreasing = false;
  }
  json summary = {{"rows", rows},
                  {"aborted", r.aborted},
                  {"strictly_decreasing", !r.aborted && decreasing},
                  {"seed", seed}};
  if (r.aborted) {
    summary["aborted_at_h"] = r.aborted_at_h;
    summary["alternative"] = to_string(Alternative::NearSingular);
  }
  if (csv.to_file()) csv.emit(t.render());
  rep.emit(render_json(summary));
  if (r.aborted) {
    err << "[solver] near_singular: convergence study aborted at h = " << r.aborted_at_h << "\n";
    return kVerificationFailed;
  }
  return kOk;
}

int cmd_torsion(const Options& opt, std::ostream& out) {
  const json doc = load_json(opt.config);
  const Obj root(doc, "config");
  root.allow({"operator", "dim", "center", "radii", "cells", "rhs", "quadrature", "seed"});
  const int dim = root.integer("dim", 1);
  if (dim < 1 || dim > 2) throw ConfigError("config: 'dim' must be 1 or 2");
  const Point center = root.has("center") ? root.point("center", dim) : Point{};
  const ProblemSpec templ = parse_problem(root, Domain::ball(center, kRho0, dim));
  const QuadratureConfig cfg = parse_quadrature(root);
  const std::vector<double> radii = root.nums("radii");
  const int cells = root.integer("cells", 16);
  const json seed = seed_of(root);
  const Sink csv(opt.out, out);
  const Sink rep(opt.report, out);

  const auto rows = torsion_scan(radii, templ, cells, cfg);
  CsvTable t;
  t.header = {"R", "max_u", "ratio", "nodes"};
  json jr = json::array();
  double lo = INFINITY, hi = 0.0;
  for (const TorsionRow& r : rows) {
    t.rows.push_back({r.R, r.max_u, r.ratio, static_cast<double>(r.nodes)});
    jr.push_back({{"R", r.R}, {"max_u", r.max_u}, {"ratio", r.ratio}, {"nodes", r.nodes}});
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  if (csv.to_file()) csv.emit(t.render());
  rep.emit(render_json({{"rows", jr}, {"bracket_ratio", rows.empty() ? 0.0 : hi / lo}, {"seed", seed}}));
  return kOk;
}

int cmd_fit(const Options& opt, std::ostream& out) {
  const json doc = load_json(opt.config);
  const Obj root(doc, "config");
  root.allow({"domain", "operator", "perturbation", "rhs", "h", "quadrature", "seed", "generator"});
  const Domain domain = parse_domain(root.child("domain"));
  const double h = positive(root, "h");
  const json seed = seed_of(root);
  const Sink rep(opt.out, out);

  const auto grid = build_grid(domain, h);
  std::shared_ptr<const GridFunction> u;
  std::string source;
  if (root.has("generator")) {
    if (root.has("operator")) throw ConfigError("config: give either 'generator' or 'operator'");
    const Obj g = root.child("generator");
    g.allow({"name", "alpha"});
    if (g.str("name") != "ell_distance")
      throw ConfigError(g.where() + ": the only generator is 'ell_distance'");
    const double a = g.num("alpha");
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = ell(domain.dist_to_boundary(grid->node(i)), a);
    u = std::make_shared<const GridFunction>(grid, std::move(v));
    source = "ell_distance";
  } else {
    const ProblemSpec problem = parse_problem(root, domain);
    const Solution s = solve_dirichlet(problem, grid, parse_quadrature(root));
    if (s.report.alternative == Alternative::NearSingular)
      throw Error(ErrorKind::Numerical, "solver", "near_singular system, nothing to fit");
    u = s.u;
    source = to_string(problem.op);
  }
  const RegularityEstimate e = estimate_regularity(*u);
  rep.emit(render_json({{"alpha_global", e.alpha_global},
                        {"alpha_interior", e.alpha_interior},
                        {"alpha_boundary", e.alpha_boundary},
                        {"interior_smoother", e.interior_smoother},
                        {"global", {{"radii", e.global_radii}, {"osc", e.global_osc}}},
                        {"boundary", {{"dist", e.boundary_dist}, {"values", e.boundary_values}}},
                        {"h", h},
                        {"nodes", grid->size()},
                        {"source", source},
                        {"seed", seed}}));
  return kOk;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  const json doc = load_json(opt.config);
  const Obj root(doc, "config");
  const std::string& lemma = opt.lemma;
  std::vector<const char*> keys{"kernel", "N", "quadrature", "seed"};
  if (lemma == "boundary") keys.insert(keys.end(), {"r", "alphas"});
  if (lemma == "bump") keys.push_back("radii");
  if (lemma == "gain") keys.insert(keys.end(), {"rhos", "fraction"});
  if (lemma == "tail") keys.insert(keys.end(), {"rhos", "alpha"});
  if (lemma == "exponential") keys.insert(keys.end(), {"alphas", "R"});
  if (lemma == "sector") keys.insert(keys.end(), {"r", "d"});
  if (lemma == "composite") keys.insert(keys.end(), {"rho", "alpha"});
  for (const auto& [k, v] : doc.items())
    if (std::find_if(keys.begin(), keys.end(), [&k = k](const char* a) { return k == a; }) ==
        keys.end())
      throw ConfigError("config: unknown key '" + k + "' for lemma " + lemma);
  const int N = root.integer("N", 1);
  if (N < 1 || N > 2) throw ConfigError("config: 'N' must be 1 or 2");
  const QuadratureConfig cfg = parse_quadrature(root);
  const KernelSpec K = parse_kernel(root.str("kernel", "unit"), N);
  const json seed = seed_of(root);
  const Sink rep(opt.out, out);

  json verdict = {{"lemma", lemma}, {"kernel", K.name}, {"N", N}, {"seed", seed}};
  bool pass = false;
  std::string diagnostic;
  if (lemma == "boundary") {
    const auto alphas = root.nums("alphas");
    const auto r = verify_boundary_barrier(K, root.num("r"), alphas, N, cfg);
    pass = r.pass;
    diagnostic = r.diagnostic;
    verdict["constants"] = {{"alpha_star", r.alpha_star}, {"delta_hat", r.delta_hat}};
    verdict["samples"] = {{"alphas", r.alphas}, {"delta", r.delta}};
  } else if (lemma == "bump" || lemma == "gain" || lemma == "tail") {
    ScaleReport r;
    if (lemma == "bump") {
      r = verify_bump(K, root.nums("radii"), N, cfg);
    } else if (lemma == "gain") {
      const double fraction = root.num("fraction", 1.0);
      if (!(fraction > 0.0 && fraction <= 1.0))
        throw ConfigError("config: 'fraction' must lie in (0, 1]");
      r = verify_gain(K, root.nums("rhos"), fraction, N, cfg);
    } else {
      r = verify_tail(K, root.nums("rhos"), root.num("alpha"), N, cfg);
    }
    pass = r.pass;
    if (!r.stable) diagnostic = "constants are not stable within 25% across the scales";
    verdict["constants"] = {{"C_hat", r.C_hat}, {"stable", r.stable}};
    verdict["samples"] = {{"scales", r.scales}, {"constants", r.constants}};
  } else if (lemma == "exponential") {
    const auto r = verify_exponential(K, root.nums("alphas"), root.num("R", 1.0), N, cfg);
    pass = r.pass;
    diagnostic = r.diagnostic;
    verdict["constants"] = {{"alpha_star", r.alpha_star}, {"c0_hat", r.c0_hat}};
    verdict["samples"] = {{"alphas", r.alphas}, {"sup_scaled", r.sup_scaled}};
  } else if (lemma == "sector") {
    const auto r = verify_sector(root.num("r"), root.nums("d"), N, cfg);
    pass = r.pass;
    verdict["constants"] = {{"c_hat", r.c_hat}};
    verdict["samples"] = {{"d", r.d}, {"values", r.values}};
  } else {
    const auto r = verify_composite(K, root.num("rho"), root.num("alpha"), N, cfg);
    pass = r.pass;
    diagnostic = r.diagnostic;
    verdict["constants"] = {{"alpha", r.alpha},
                            {"rho", r.rho},
                            {"delta_hat", r.delta_hat},
                            {"delta", r.delta}};
    verdict["samples"] = {
        {"max_scaled", r.max_scaled},
        {"shell", {{"inner", r.shell.inner}, {"outer", r.shell.outer}, {"measure", r.shell.measure}}}};
  }
  verdict["pass"] = pass;
  if (!diagnostic.empty()) verdict["diagnostic"] = diagnostic;
  rep.emit(render_json(verdict));
  if (!pass) {
    err << "[barriers] verification failed for lemma " << lemma
        << (diagnostic.empty() ? "" : ": " + diagnostic) << "\n";
    return kVerificationFailed;
  }
  return kOk;
}

bool is_config_kind(ErrorKind k) {
  return k == ErrorKind::Argument || k == ErrorKind::Domain || k == ErrorKind::Unsupported ||
         k == ErrorKind::Resolution || k == ErrorKind::Contract;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-order nonlocal operators: evaluation, Dirichlet solves and barrier checks",
               "lognl"};
  app.require_subcommand(1);
  Options opt;

  auto* constants = app.add_subcommand("constants", "Logarithmic Laplacian constants c_N, rho_N");
  constants->add_option("--N", opt.N, "Dimension")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate an operator on a closed-form field at a point");
  eval->add_option("--op", opt.op, "LK, loglap, loglap_direct, schrodinger, J or remainder")
      ->check(CLI::IsMember({"LK", "loglap", "loglap_direct", "schrodinger", "J", "remainder"}));
  eval->add_option("--kernel", opt.kernel, "Kernel catalog name (LK, remainder)");
  eval->add_option("--field", opt.field,
                   "const(c), linear, quadratic, gaussian(sigma) or ell_profile(alpha)");
  eval->add_option("--x", opt.x, "Evaluation point, comma separated")->delimiter(',')->required();
  eval->add_option("--N", opt.N, "Dimension (1 or 2)");
  eval->add_option("--mode", opt.mode, "Quadrature mode")->check(CLI::IsMember({"fast", "oracle"}));
  eval->add_option("--n-radial", opt.n_radial, "Radial nodes per panel");
  eval->add_option("--n-angular", opt.n_angular, "Angular nodes (N = 2)");
  eval->add_option("--r-min", opt.r_min, "Inner radial cutoff");
  eval->add_option("--index", opt.index, "Mollification index i (remainder)");

  auto* solve = app.add_subcommand("solve", "Solve a Dirichlet problem with zero exterior data");
  solve->add_option("--config", opt.config, "JSON configuration")->required();
  solve->add_option("--out", opt.out, "Solution CSV");
  solve->add_option("--report", opt.report, "Report JSON (stdout when omitted)");

  auto* verify = app.add_subcommand("verify", "Check a barrier inequality numerically");
  verify->add_option("--lemma", opt.lemma, "boundary, bump, gain, tail, exponential, sector, composite")
      ->required()
      ->check(CLI::IsMember(
          {"boundary", "bump", "gain", "tail", "exponential", "sector", "composite"}));
  verify->add_option("--config", opt.config, "JSON configuration")->required();
  verify->add_option("--out", opt.out, "Verdict JSON (stdout when omitted)");

  auto* torsion = app.add_subcommand("torsion", "Torsion maxima against l(R) on small balls");
  torsion->add_option("--config", opt.config, "JSON configuration")->required();
  torsion->add_option("--out", opt.out, "Table CSV");
  torsion->add_option("--report", opt.report, "Summary JSON (stdout when omitted)");

  auto* fit = app.add_subcommand("fit", "Empirical regularity exponents of a solution");
  fit->add_option("--config", opt.config, "JSON configuration")->required();
  fit->add_option("--out", opt.out, "Exponent JSON (stdout when omitted)");

  auto* conv = app.add_subcommand("converge", "Successive differences under grid refinement");
  conv->add_option("--config", opt.config, "JSON configuration")->required();
  conv->add_option("--out", opt.out, "Table CSV");
  conv->add_option("--report", opt.report, "Summary JSON (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (*constants) return cmd_constants(opt, out);
    if (*eval) return cmd_eval(opt, out);
    if (*solve) return cmd_solve(opt, out, err);
    if (*verify) return cmd_verify(opt, out, err);
    if (*torsion) return cmd_torsion(opt, out);
    if (*fit) return cmd_fit(opt, out);
    if (*conv) return cmd_converge(opt, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "[" << e.module() << "] " << to_string(e.kind()) << ": " << e.what() << "\n";
    return is_config_kind(e.kind()) ? kUsage : kVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailed;
  }
  return kUsage;
}

}  // namespace lognl::cli
