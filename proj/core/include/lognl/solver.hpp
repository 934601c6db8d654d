#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lognl/geometry.hpp"
#include "lognl/kernels.hpp"
#include "lognl/nonlocal_eval.hpp"
#include "lognl/quadrature.hpp"

namespace lognl {

enum class OperatorKind { Generic, LogLap, Schrodinger };

const char* to_string(OperatorKind op);

/// Zero-order perturbation T. The logarithmic Laplacian always carries its
/// own tail -c_N J* + rho_N; `loglap_tail` attaches the same tail to a
/// generic operator, and `identity` adds c * identity on top.
struct Perturbation {
  double identity = 0.0;
  bool loglap_tail = false;
};

/// Dirichlet problem (L + T) u = f in the domain, u = 0 outside.
struct ProblemSpec {
  OperatorKind op = OperatorKind::Generic;
  KernelSpec kernel = unit_kernel();
  Perturbation T;
  Domain domain = Domain::interval(-0.25, 0.25);
  FieldFunction rhs = constant_field(1.0);

  static ProblemSpec generic(KernelSpec K, Domain domain, FieldFunction rhs);
  static ProblemSpec loglap(Domain domain, FieldFunction rhs);
  static ProblemSpec schrodinger(Domain domain, FieldFunction rhs);

  int dim() const { return domain.dim(); }
  bool has_perturbation() const { return T.loglap_tail || T.identity != 0.0; }
};

/// Dense collocation matrix: (A v)_i is the operator applied to the
/// multilinear interpolant of v at node i.
struct StiffnessMatrix {
  Eigen::MatrixXd A;
  std::shared_ptr<const Grid> grid;
};

/// Threads used by assembly: LOGNL_THREADS if set, else hardware concurrency.
unsigned worker_threads();

StiffnessMatrix assemble(const ProblemSpec& problem, std::shared_ptr<const Grid> grid,
                         const QuadratureConfig& cfg);

enum class Alternative { UniqueSolution, NearSingular };

const char* to_string(Alternative a);

struct MaxPrincipleAudit {
  /// f >= 0 at every node, so u >= -tol is required.
  bool applicable = false;
  bool pass = true;
  double max_violation = 0.0;
  double tolerance = 0.0;
  /// ||u||_inf / ||f||_inf (0 when f = 0).
  double sup_ratio = 0.0;
};

struct SolveReport {
  double residual_inf = 0.0;
  double condition_estimate = 0.0;
  double rcond = 0.0;
  Alternative alternative = Alternative::UniqueSolution;
  MaxPrincipleAudit mp_audit;
  double h = 0.0;
  std::size_t nodes = 0;
  /// Unit-norm approximate kernel vector when near-singular.
  std::vector<double> kernel_vector;
};

/// Reciprocal condition below which the system is reported near-singular.
inline constexpr double kNearSingularRcond = 1e-10;

struct Solution {
  /// Null when the system is near-singular.
  std::shared_ptr<const GridFunction> u;
  SolveReport report;
};

/// Partial-pivot LU solve of an assembled system with nodal right-hand side.
Solution solve_system(const StiffnessMatrix& A, std::span<const double> f);

Solution solve_dirichlet(const ProblemSpec& problem, std::shared_ptr<const Grid> grid,
                         const QuadratureConfig& cfg);

/// Factorizes without solving and reports which alternative holds.
SolveReport fredholm_probe(const ProblemSpec& problem, std::shared_ptr<const Grid> grid,
                           const QuadratureConfig& cfg);

struct FredholmSweep {
  std::vector<double> mu;
  std::vector<int> det_sign;
  /// Bisected mu with det(A - mu I) = 0, in increasing order.
  std::vector<double> crossings;
  /// Smallest real part among the eigenvalues of A.
  double smallest_eigenvalue = 0.0;
  /// Alternative reported by the shifted system at the first crossing.
  Alternative at_first_crossing = Alternative::UniqueSolution;
};

/// Sweeps T = -mu * identity over `mu` and brackets sign changes of det.
FredholmSweep fredholm_sweep(const StiffnessMatrix& A, std::span<const double> mu);

struct TorsionRow {
  double R = 0.0;
  double max_u = 0.0;
  double ratio = 0.0;
  std::size_t nodes = 0;
};

/// Solves L u = rhs on B_R (zero exterior data) for each R with h = R / cells.
std::vector<TorsionRow> torsion_scan(std::span<const double> radii, const ProblemSpec& templ,
                                     int cells, const QuadratureConfig& cfg);

struct RegularityEstimate {
  double alpha_global = 0.0;
  double alpha_interior = 0.0;
  double alpha_boundary = 0.0;
  bool interior_smoother = false;
  std::vector<double> global_radii, global_osc;
  std::vector<double> boundary_dist, boundary_values;
};

/// Empirical exponents of a solved grid function (see README for the fits).
RegularityEstimate estimate_regularity(const GridFunction& u);

/// Fit of |u| against l^a(d) along the inward normal at the boundary probe.
double fit_boundary_exponent(const GridFunction& u, std::vector<double>* dist = nullptr,
                             std::vector<double>* values = nullptr);

struct ConvergeRow {
  double h = 0.0;
  double sup_diff = 0.0;
};

struct ConvergeReport {
  std::vector<ConvergeRow> rows;
  bool aborted = false;
  double aborted_at_h = 0.0;
};

/// Solves at each spacing and reports the sup difference to the next finer
/// level at the coarse nodes. Stops with `aborted` on a near-singular level.
ConvergeReport converge(const ProblemSpec& problem, std::span<const double> h_list,
                        const QuadratureConfig& cfg);

}  // namespace lognl
