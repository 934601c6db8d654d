#include "lognl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "lognl/error.hpp"
#include "lognl/logmod.hpp"

namespace lognl {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, "solver", what);
}

// Distance from x to the farthest corner of the grid window, plus one cell.
double window_reach(const Grid& g, const Point& x) {
  double far = 0.0;
  const int N = g.dim();
  for (int cx = 0; cx < 2; ++cx)
    for (int cy = 0; cy < (N == 2 ? 2 : 1); ++cy) {
      Point c{cx ? g.window_hi(0) : g.window_lo(0), 0.0};
      if (N == 2) c[1] = cy ? g.window_hi(1) : g.window_lo(1);
      far = std::max(far, norm(c - x));
    }
  return far + g.h();
}

void assemble_row(const ProblemSpec& p, const Grid& grid, const QuadratureConfig& cfg,
                  std::size_t i, std::vector<double>& row) {
  std::fill(row.begin(), row.end(), 0.0);
  const int N = grid.dim();
  const Point x = grid.node(i);
  const double reach = window_reach(grid, x);
  double hi = p.kernel.range;
  const double c_N = loglap_constants(N).c_N;
  const bool generic_tail = p.op == OperatorKind::Generic && p.T.loglap_tail;
  if (p.op == OperatorKind::LogLap) {
    hi = std::max(1.0, reach);
  } else if (generic_tail) {
    hi = std::max(p.kernel.range, reach);
  } else if (p.op == OperatorKind::Schrodinger) {
    hi = std::max(40.0, reach);
  }
  std::vector<RayBreak> brk;
  std::vector<RadialNode> nodes;
  std::array<StencilEntry, 4> st{};
  double diag = 0.0;
  for (const Direction& d : directions(N, cfg)) {
    brk.clear();
    lattice_crossings(grid, x, d.unit, brk);
    for (double b : p.kernel.radial_breaks) brk.push_back({b, false});
    if (p.op == OperatorKind::LogLap) brk.push_back({1.0, false});
    if (generic_tail) brk.push_back({p.kernel.range, false});
    radial_nodes(cfg.r_min, hi, brk, cfg, false, nodes);
    for (const RadialNode& q : nodes) {
      const Point off = q.rho * d.unit;
      const double base = d.weight * q.weight / q.rho;
      double f = 0.0;
      bool local = true;
      switch (p.op) {
        case OperatorKind::Generic:
          if (q.rho < p.kernel.range) {
            f = base * p.kernel.evaluate(x, off);
          } else {
            f = base * c_N;
            local = false;
          }
          break;
        case OperatorKind::LogLap:
          f = base * c_N;
          local = q.rho < 1.0;
          break;
        case OperatorKind::Schrodinger:
          f = base * schrodinger_weight(q.rho, N);
          break;
      }
      if (!std::isfinite(f))
        fail(ErrorKind::Numerical, "assembly failed at node " + std::to_string(i) +
                                       ": non-finite quadrature weight");
      if (local) diag += f;
      if (q.rho > reach) continue;
      const int m = grid.stencil(x + off, st);
      for (int k = 0; k < m; ++k) row[static_cast<std::size_t>(st[k].node)] -= f * st[k].weight;
    }
  }
  row[i] += diag;
  if (p.op == OperatorKind::LogLap || p.T.loglap_tail) row[i] += loglap_constants(N).rho_N;
  row[i] += p.T.identity;
}

int det_sign(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  int s = static_cast<int>(std::lround(lu.permutationP().determinant()));
  const auto& m = lu.matrixLU();
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const double v = m(k, k);
    if (v == 0.0) return 0;
    if (v < 0.0) s = -s;
  }
  return s;
}

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

const char* to_string(OperatorKind op) {
  switch (op) {
    case OperatorKind::Generic: return "generic";
    case OperatorKind::LogLap: return "loglap";
    case OperatorKind::Schrodinger: return "schrodinger";
  }
  return "unknown";
}

const char* to_string(Alternative a) {
  return a == Alternative::UniqueSolution ? "unique_solution" : "near_singular";
}

ProblemSpec ProblemSpec::generic(KernelSpec K, Domain domain, FieldFunction rhs) {
  ProblemSpec p;
  p.op = OperatorKind::Generic;
  p.kernel = std::move(K);
  p.domain = std::move(domain);
  p.rhs = std::move(rhs);
  return p;
}

ProblemSpec ProblemSpec::loglap(Domain domain, FieldFunction rhs) {
  ProblemSpec p;
  p.op = OperatorKind::LogLap;
  p.kernel = make_kernel("loglap", domain.dim());
  p.T.loglap_tail = true;
  p.domain = std::move(domain);
  p.rhs = std::move(rhs);
  return p;
}

ProblemSpec ProblemSpec::schrodinger(Domain domain, FieldFunction rhs) {
  ProblemSpec p;
  p.op = OperatorKind::Schrodinger;
  p.kernel = make_kernel("schrodinger", domain.dim());
  p.domain = std::move(domain);
  p.rhs = std::move(rhs);
  return p;
}

unsigned worker_threads() {
  if (const char* env = std::getenv("LOGNL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

StiffnessMatrix assemble(const ProblemSpec& problem, std::shared_ptr<const Grid> grid,
                         const QuadratureConfig& cfg) {
  if (!grid || grid->size() == 0) fail(ErrorKind::Argument, "assembly needs a nonempty grid");
  cfg.validate();
  if (problem.op == OperatorKind::Schrodinger) schrodinger_weight(1.0, grid->dim());
  if (problem.op == OperatorKind::Generic && !problem.kernel.evaluate)
    fail(ErrorKind::Argument, "generic operator without a kernel");
  const std::size_t n = grid->size();
  StiffnessMatrix S;
  S.grid = grid;
  S.A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const unsigned threads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(n));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      std::vector<double> row(n);
      for (std::size_t i = t; i < n; i += threads) {
        assemble_row(problem, *grid, cfg, i, row);
        for (std::size_t j = 0; j < n; ++j)
          S.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return S;
}

Solution solve_system(const StiffnessMatrix& S, std::span<const double> f) {
  const auto n = S.A.rows();
  if (static_cast<std::size_t>(n) != f.size())
    fail(ErrorKind::Argument, "right-hand side length does not match the matrix");
  const Eigen::Map<const Eigen::VectorXd> rhs(f.data(), n);
  Solution out;
  SolveReport& rep = out.report;
  rep.h = S.grid ? S.grid->h() : 0.0;
  rep.nodes = static_cast<std::size_t>(n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(S.A);
  rep.rcond = lu.rcond();
  rep.condition_estimate =
      rep.rcond > 0.0 ? 1.0 / rep.rcond : std::numeric_limits<double>::infinity();
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  if (!(rep.rcond >= kNearSingularRcond)) {
    rep.alternative = Alternative::NearSingular;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    for (int it = 0; it < 4; ++it) {
      Eigen::VectorXd w = lu.solve(v);
      if (!w.allFinite() || w.norm() == 0.0) {
        Eigen::FullPivLU<Eigen::MatrixXd> full(S.A);
        w = full.kernel().col(0);
      }
      v = w / w.norm();
    }
    rep.kernel_vector.assign(v.data(), v.data() + n);
    rep.residual_inf = (S.A * v).cwiseAbs().maxCoeff();
  } else {
    const Eigen::VectorXd u = lu.solve(rhs);
    rep.residual_inf = n > 0 ? (S.A * u - rhs).cwiseAbs().maxCoeff() : 0.0;
    values.assign(u.data(), u.data() + n);
    MaxPrincipleAudit& mp = rep.mp_audit;
    mp.tolerance = 10.0 * rep.residual_inf;
    mp.applicable = std::all_of(f.begin(), f.end(), [](double v) { return v >= 0.0; });
    if (mp.applicable) {
      const double lo = values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
      mp.max_violation = std::max(0.0, -lo);
      mp.pass = lo >= -mp.tolerance;
    }
    const double fs = sup_abs(f);
    mp.sup_ratio = fs > 0.0 ? sup_abs(values) / fs : 0.0;
  }
  if (S.grid && rep.alternative == Alternative::UniqueSolution)
    out.u = std::make_shared<const GridFunction>(S.grid, std::move(values));
  return out;
}

Solution solve_dirichlet(const ProblemSpec& problem, std::shared_ptr<const Grid> grid,
                         const QuadratureConfig& cfg) {
  const StiffnessMatrix S = assemble(problem, grid, cfg);
  std::vector<double> f(grid->size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = problem.rhs(grid->node(i));
    if (!std::isfinite(f[i])) fail(ErrorKind::Numerical, "right-hand side is not finite at a node");
  }
  return solve_system(S, f);
}

SolveReport fredholm_probe(const ProblemSpec& problem, std::shared_ptr<const Grid> grid,
                           const QuadratureConfig& cfg) {
  const StiffnessMatrix S = assemble(problem, grid, cfg);
  std::vector<double> zero(grid->size(), 0.0);
  return solve_system(S, zero).report;
}

FredholmSweep fredholm_sweep(const StiffnessMatrix& S, std::span<const double> mu) {
  if (mu.size() < 2) fail(ErrorKind::Argument, "the sweep needs at least two shifts");
  const auto n = S.A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  auto sign_at = [&](double m) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(S.A - m * I);
    return det_sign(lu);
  };
  FredholmSweep out;
  out.mu.assign(mu.begin(), mu.end());
  for (double m : mu) out.det_sign.push_back(sign_at(m));
  for (std::size_t k = 0; k + 1 < mu.size(); ++k) {
    const int s0 = out.det_sign[k], s1 = out.det_sign[k + 1];
    if (s0 == 0) {
      out.crossings.push_back(mu[k]);
      continue;
    }
    if (s1 == 0 || s0 == s1) continue;
    double a = mu[k], b = mu[k + 1];
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
      const double m = 0.5 * (a + b);
      const int sm = sign_at(m);
      if (sm == 0) {
        a = b = m;
        break;
      }
      (sm == s0 ? a : b) = m;
    }
    out.crossings.push_back(0.5 * (a + b));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(S.A, false);
  out.smallest_eigenvalue = es.eigenvalues().real().minCoeff();
  if (!out.crossings.empty()) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(S.A - out.crossings.front() * I);
    out.at_first_crossing =
        lu.rcond() >= kNearSingularRcond ? Alternative::UniqueSolution : Alternative::NearSingular;
  }
  return out;
}

std::vector<TorsionRow> torsion_scan(std::span<const double> radii, const ProblemSpec& templ,
                                     int cells, const QuadratureConfig& cfg) {
  if (cells < 2) fail(ErrorKind::Argument, "torsion scan needs at least two cells per radius");
  std::vector<TorsionRow> rows;
  for (double R : radii) {
    if (!(R > 0.0 && R <= kRho0 + 1e-15))
      fail(ErrorKind::Argument, "torsion radii must lie in (0, 0.1]");
    ProblemSpec p = templ;
    p.domain = Domain::ball(templ.domain.center(), R, templ.dim());
    const auto grid = build_grid(p.domain, R / cells);
    const Solution s = solve_dirichlet(p, grid, cfg);
    if (s.report.alternative == Alternative::NearSingular)
      fail(ErrorKind::Numerical, "torsion problem is near-singular at R = " + std::to_string(R));
    TorsionRow row;
    row.R = R;
    row.nodes = grid->size();
    const auto& v = s.u->values();
    row.max_u = *std::max_element(v.begin(), v.end());
    row.ratio = row.max_u / ell(R);
    rows.push_back(row);
  }
  return rows;
}

double fit_boundary_exponent(const GridFunction& u, std::vector<double>* dist,
                             std::vector<double>* values) {
  const Grid& grid = u.grid();
  const Domain& dom = grid.domain();
  const Point x0 = dom.boundary_probe();
  const Point nrm = dom.inward_normal();
  const double h = grid.h();
  std::vector<std::pair<double, std::size_t>> ray;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point v = grid.node(i) - x0;
    const double t = dot(v, nrm);
    const Point perp = v - t * nrm;
    if (t > 0.0 && norm(perp) < 0.5 * h) ray.emplace_back(t, i);
  }
  std::sort(ray.begin(), ray.end());
  // The two nodes next to the boundary sit on the interpolation seam.
  if (ray.size() > 2) ray.erase(ray.begin(), ray.begin() + 2);
  std::vector<double> d, a;
  const double upper = std::min(kRho0, 0.5 * dom.inradius());
  double target = 0.0;
  for (const auto& [t, i] : ray) {
    if (t < target) continue;
    const double dk = dom.dist_to_boundary(grid.node(i));
    if (dk >= upper) break;
    if (u[i] != 0.0) {
      d.push_back(dk);
      a.push_back(std::abs(u[i]));
    }
    target = 2.0 * t;
  }
  if (dist) *dist = d;
  if (values) *values = a;
  if (d.size() < 3)
    throw Error(ErrorKind::Diagnostic, "solver", "too few dyadic scales along the boundary normal");
  return fit_exponent(d, a);
}

RegularityEstimate estimate_regularity(const GridFunction& u) {
  const Grid& grid = u.grid();
  const Domain& dom = grid.domain();
  const double h = grid.h();
  RegularityEstimate est;

  const Point x0 = dom.boundary_probe();
  for (double r = std::min(0.08, 0.5 * dom.diameter()); r >= 4.0 * h; r *= 0.5) {
    double hi = 0.0, lo = 0.0;  // exterior zero lies in every such ball
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (norm(grid.node(i) - x0) < r) {
        hi = std::max(hi, u[i]);
        lo = std::min(lo, u[i]);
      }
    est.global_radii.push_back(r);
    est.global_osc.push_back(hi - lo);
  }
  if (est.global_radii.size() < 3)
    throw Error(ErrorKind::Diagnostic, "solver", "fewer than three dyadic scales for the global fit");
  est.alpha_global = fit_exponent(est.global_radii, est.global_osc);

  const Point c = dom.center();
  const double dc = dom.dist_to_boundary(c);
  std::vector<double> eps;
  for (double e = h; e < std::min(kRho0, 0.5 * dc); e *= 2.0) eps.push_back(e);
  if (eps.size() < 3)
    throw Error(ErrorKind::Diagnostic, "solver", "fewer than three dyadic scales for the interior fit");
  const SecondOrderFit fit = fit_second_order_exponent(u, c, eps);
  est.interior_smoother = fit.status != SecondOrderFit::Status::Fitted;
  est.alpha_interior =
      (fit.status == SecondOrderFit::Status::Flat ? kMaxSecondOrderExponent : fit.gamma) - 1.0;

  est.alpha_boundary = fit_boundary_exponent(u, &est.boundary_dist, &est.boundary_values);
  return est;
}

ConvergeReport converge(const ProblemSpec& problem, std::span<const double> h_list,
                        const QuadratureConfig& cfg) {
  if (h_list.size() < 3) fail(ErrorKind::Argument, "a convergence study needs >= 3 levels");
  ConvergeReport rep;
  std::vector<std::shared_ptr<const GridFunction>> sols;
  for (double h : h_list) {
    const Solution s = solve_dirichlet(problem, build_grid(problem.domain, h), cfg);
    if (s.report.alternative == Alternative::NearSingular) {
      rep.aborted = true;
      rep.aborted_at_h = h;
      return rep;
    }
    sols.push_back(s.u);
  }
  for (std::size_t k = 0; k + 1 < sols.size(); ++k) {
    const GridFunction& coarse = *sols[k];
    const GridFunction& fine = *sols[k + 1];
    double diff = 0.0;
    for (std::size_t i = 0; i < coarse.grid().size(); ++i)
      diff = std::max(diff, std::abs(coarse[i] - fine.interpolate(coarse.grid().node(i))));
    rep.rows.push_back({h_list[k], diff});
  }
  return rep;
}

}  // namespace lognl
