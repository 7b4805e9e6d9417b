#include "qcr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qcr {

namespace {

struct Assembly {
  double energy = 0.0;
  bool finite = true;
  int barrier_cell = -1;
};

Assembly evaluate_energy(const VariationalProblem& pb, const std::vector<Vector2d>& u) {
  Assembly out;
  const TriMesh& mesh = *pb.mesh;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cell(c);
    Matrix2d D;
    D.col(0) = u[t[1]] - u[t[0]];
    D.col(1) = u[t[2]] - u[t[0]];
    D = D * mesh.edge_inverse(c);
    const ExtendedReal w = pb.W(D);
    if (!w.is_finite()) {
      out.finite = false;
      out.barrier_cell = c;
      out.energy = kInf;
      return out;
    }
    double e = w.value();
    if (pb.kappa > 0.0) {
      const double d = determinant(D) - 1.0;
      e += pb.kappa * d * d;
    }
    if (pb.f) {
      const Vector2d ub = (u[t[0]] + u[t[1]] + u[t[2]]) / 3.0;
      e += pb.f(ub);
    }
    out.energy += mesh.area(c) * e;
  }
  return out;
}

void assemble_gradient(const VariationalProblem& pb, const std::vector<Vector2d>& u,
                       std::vector<Vector2d>& grad) {
  const TriMesh& mesh = *pb.mesh;
  grad.assign(u.size(), Vector2d::Zero());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = mesh.cell(c);
    Matrix2d D;
    D.col(0) = u[t[1]] - u[t[0]];
    D.col(1) = u[t[2]] - u[t[0]];
    D = D * mesh.edge_inverse(c);
    Matrix2d P = pb.dW ? pb.dW(D) : fd_density_gradient(pb.W, D);
    if (pb.kappa > 0.0) P += 2.0 * pb.kappa * (determinant(D) - 1.0) * cofactor(D);
    const Matrix2d& Einv = mesh.edge_inverse(c);
    const Vector2d g1 = Einv.row(0).transpose();
    const Vector2d g2 = Einv.row(1).transpose();
    const Vector2d g0 = -g1 - g2;
    const double a = mesh.area(c);
    grad[t[0]] += a * (P * g0);
    grad[t[1]] += a * (P * g1);
    grad[t[2]] += a * (P * g2);
    if (pb.df) {
      const Vector2d ub = (u[t[0]] + u[t[1]] + u[t[2]]) / 3.0;
      const Vector2d fg = (a / 3.0) * pb.df(ub);
      grad[t[0]] += fg;
      grad[t[1]] += fg;
      grad[t[2]] += fg;
    }
  }
  for (int v : pb.dirichlet) grad[v].setZero();
}

double dot(const std::vector<Vector2d>& a, const std::vector<Vector2d>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

}  // namespace

Matrix2d fd_density_gradient(const std::function<ExtendedReal(const Matrix2d&)>& W,
                             const Matrix2d& F, double step) {
  const double h = step > 0.0 ? step : 1e-6 * std::max(1.0, F.norm());
  Matrix2d G;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix2d Fp = F, Fm = F;
      Fp(i, j) += h;
      Fm(i, j) -= h;
      const ExtendedReal wp = W(Fp), wm = W(Fm);
      if (wp.is_finite() && wm.is_finite()) {
        G(i, j) = (wp.value() - wm.value()) / (2.0 * h);
      } else if (wp.is_finite()) {
        G(i, j) = (wp.value() - W(F).value()) / h;  // one-sided at the barrier
      } else if (wm.is_finite()) {
        G(i, j) = (W(F).value() - wm.value()) / h;
      } else {
        G(i, j) = 0.0;
      }
    }
  }
  return G;
}

MeshField make_seeded_init(const VariationalProblem& problem, double amplitude, unsigned seed) {
  const TriMesh& mesh = *problem.mesh;
  std::vector<Vector2d> u(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) u[v] = problem.u0(mesh.vertex(v));
  std::vector<char> fixed(mesh.num_vertices(), 0);
  for (int v : problem.dirichlet) fixed[v] = 1;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Vector2d> noise(mesh.num_vertices(), Vector2d::Zero());
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!fixed[v]) noise[v] = Vector2d(unit(rng), unit(rng));

  double amp = amplitude;
  for (int attempt = 0; attempt < 40; ++attempt) {
    std::vector<Vector2d> cand = u;
    for (int v = 0; v < mesh.num_vertices(); ++v) cand[v] += amp * noise[v];
    VariationalProblem probe = problem;
    if (evaluate_energy(problem, cand).finite) return MeshField(problem.mesh, std::move(cand));
    amp /= 2.0;
  }
  return MeshField(problem.mesh, std::move(u));  // unperturbed boundary interpolant
}

std::pair<MeshField, MinimizeDiagnostics> minimize(const VariationalProblem& problem,
                                                   const MeshField& init,
                                                   const MinimizeSchedule& schedule) {
  const TriMesh& mesh = *problem.mesh;
  std::vector<Vector2d> u = init.values();
  for (int v : problem.dirichlet) u[v] = problem.u0(mesh.vertex(v));

  MinimizeDiagnostics diag;
  Assembly cur = evaluate_energy(problem, u);
  if (!cur.finite)
    throw std::invalid_argument("minimize: initial field violates the constraint mode");
  diag.energy_log.push_back(cur.energy);

  std::vector<Vector2d> grad, prev_grad, prev_u;
  assemble_gradient(problem, u, grad);
  double step = 1.0 / std::max(1.0, std::sqrt(dot(grad, grad)));

  for (int it = 0; it < schedule.max_iterations; ++it) {
    diag.iterations = it + 1;
    const double g2 = dot(grad, grad);
    diag.final_gradient_norm = std::sqrt(g2);
    if (diag.final_gradient_norm <= schedule.grad_tol) break;
    if (cur.energy <= schedule.target_energy) break;

    // Armijo backtracking along -grad with a Barzilai-Borwein initial step.
    double t = step;
    bool accepted = false;
    for (int bt = 0; bt < schedule.max_backtracks; ++bt) {
      std::vector<Vector2d> cand = u;
      for (size_t v = 0; v < u.size(); ++v) cand[v] -= t * grad[v];
      const Assembly trial = evaluate_energy(problem, cand);
      if (trial.finite && trial.energy <= cur.energy - schedule.armijo * t * g2) {
        prev_u = std::move(u);
        u = std::move(cand);
        cur = trial;
        accepted = true;
        break;
      }
      if (!trial.finite) diag.failing_cell = trial.barrier_cell;
      t /= 2.0;
    }
    if (!accepted) {
      diag.line_search_failed = true;
      break;
    }
    diag.energy_log.push_back(cur.energy);

    prev_grad = std::move(grad);
    assemble_gradient(problem, u, grad);
    // BB1 step from the last displacement/gradient change.
    double sy = 0.0, ss = 0.0;
    for (size_t v = 0; v < u.size(); ++v) {
      const Vector2d s = u[v] - prev_u[v];
      const Vector2d y = grad[v] - prev_grad[v];
      sy += s.dot(y);
      ss += s.dot(s);
    }
    step = (sy > 1e-14 * ss) ? ss / sy : 2.0 * t;
    step = std::clamp(step, 1e-12, 1e6);
  }
  diag.final_energy = cur.energy;
  return {MeshField(problem.mesh, std::move(u)), diag};
}

std::vector<int> full_boundary(const TriMesh& mesh) { return mesh.boundary_vertices(); }

std::vector<GapRow> gap_report(
    const std::function<VariationalProblem(std::shared_ptr<const TriMesh>)>& unrelaxed,
    const std::function<VariationalProblem(std::shared_ptr<const TriMesh>)>& relaxed,
    const std::vector<int>& mesh_sides, const MinimizeSchedule& schedule, unsigned seed) {
  std::vector<GapRow> rows;
  std::optional<MeshField> coarse_min;
  for (int n : mesh_sides) {
    auto mesh = make_unit_square_mesh(n);
    VariationalProblem pu = unrelaxed(mesh);
    VariationalProblem pr = relaxed(mesh);

    // Unrelaxed: continue the previous minimizer (nested spaces make the
    // minima nonincreasing); seed oscillations on the coarsest mesh.
    MeshField init_u = coarse_min.has_value()
                           ? [&] {
                               PointLocator loc(coarse_min->mesh_ptr());
                               std::vector<Vector2d> vals(mesh->num_vertices());
                               for (int v = 0; v < mesh->num_vertices(); ++v)
                                 vals[v] = evaluate(*coarse_min, loc, mesh->vertex(v));
                               return MeshField(mesh, std::move(vals));
                             }()
                           : make_seeded_init(pu, 0.01, seed);
    auto [umin, udiag] = minimize(pu, init_u, schedule);
    coarse_min = umin;

    auto [rmin, rdiag] = minimize(pr, make_seeded_init(pr, 0.01, seed), schedule);

    GapRow row;
    row.n = n;
    row.h = 1.0 / n;
    row.unrelaxed = udiag.final_energy;
    row.relaxed = rdiag.final_energy;
    row.ordered = row.relaxed <= row.unrelaxed + 1e-8;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qcr
