#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qcr/energy.hpp"
#include "qcr/mesh.hpp"

namespace qcr {

/// Discrete functional E[u] = sum_cells |c| W(Du) + quadrature of f(u), with
/// Dirichlet data on a boundary subset.  W may be extended-valued; +inf acts
/// as a barrier (the line search rejects steps crossing it).
struct VariationalProblem {
  std::shared_ptr<const TriMesh> mesh;
  std::function<ExtendedReal(const Matrix2d&)> W;
  std::function<Matrix2d(const Matrix2d&)> dW;  ///< analytic gradient; empty -> central FD
  std::function<double(const Vector2d&)> f;     ///< optional lower-order term
  std::function<Vector2d(const Vector2d&)> df;
  double f_growth_q = 0.0;  ///< recorded growth tag of f (must stay below p)
  double p = 2.0;
  ConstraintMode mode = ConstraintMode::kOrientationPreserving;
  std::vector<int> dirichlet;  ///< constrained vertex ids
  std::function<Vector2d(const Vector2d&)> u0;  ///< Dirichlet data
  double kappa = 0.0;  ///< incompressible quadratic penalty weight
};

struct MinimizeSchedule {
  int max_iterations = 4000;
  double grad_tol = 1e-7;    ///< on the max-norm of the projected gradient
  double target_energy = -kInf;  ///< stop early when reached
  double armijo = 1e-4;
  int max_backtracks = 60;
};

struct MinimizeDiagnostics {
  int iterations = 0;
  double final_energy = 0.0;
  double final_gradient_norm = 0.0;
  bool line_search_failed = false;
  int failing_cell = -1;  ///< cell at the barrier when the line search stalled
  std::vector<double> energy_log;
};

/// Projected Barzilai-Borwein descent with Armijo backtracking.  Every
/// accepted iterate keeps per-cell det Du > 0 in the orientation mode (the
/// extended value acts as an infinite barrier) and holds the Dirichlet values
/// exactly.  Accepted energies are nonincreasing.
std::pair<MeshField, MinimizeDiagnostics> minimize(const VariationalProblem& problem,
                                                   const MeshField& init,
                                                   const MinimizeSchedule& schedule = {});

/// Affine interpolation of the boundary data plus a seeded interior
/// perturbation (halved until the constraint mode admits the field).
MeshField make_seeded_init(const VariationalProblem& problem, double amplitude, unsigned seed);

/// Central finite-difference gradient of a density (step 1e-6 * scale).
Matrix2d fd_density_gradient(const std::function<ExtendedReal(const Matrix2d&)>& W,
                             const Matrix2d& F, double step = 0.0);

struct GapRow {
  int n = 0;          ///< mesh subdivisions per side
  double h = 0.0;
  double unrelaxed = 0.0;
  double relaxed = 0.0;
  bool ordered = false;  ///< relaxed <= unrelaxed + 1e-8
};

/// Per-mesh minima of a functional pair sharing boundary data.  Minimizers
/// are continued across meshes (nested P1 interpolation), so unrelaxed minima
/// are nonincreasing in resolution by construction of the search space.
std::vector<GapRow> gap_report(
    const std::function<VariationalProblem(std::shared_ptr<const TriMesh>)>& unrelaxed,
    const std::function<VariationalProblem(std::shared_ptr<const TriMesh>)>& relaxed,
    const std::vector<int>& mesh_sides, const MinimizeSchedule& schedule, unsigned seed = 0);

/// Dirichlet set helper: all boundary vertices of the mesh.
std::vector<int> full_boundary(const TriMesh& mesh);

}  // namespace qcr
