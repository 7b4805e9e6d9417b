#include "qcr/convexity_checks.hpp"

#include <cmath>

namespace qcr {

JensenReport quasiconvexity_jensen_test(const DensityFn& candidate,
                                        const std::vector<LaminateSpec>& laminates, double tol) {
  JensenReport report;
  for (size_t i = 0; i < laminates.size(); ++i) {
    const LaminatePatch patch = build_laminate(laminates[i], 1.0);
    const ExtendedReal wf = candidate(laminates[i].mean());
    ++report.tested;
    if (!wf.is_finite()) continue;  // nothing to check against
    double mean = 0.0;
    bool infinite = false;
    for (int c = 0; c < patch.field.mesh().num_cells(); ++c) {
      const ExtendedReal w = candidate(patch.field.gradient(c));
      if (!w.is_finite()) {
        infinite = true;
        break;
      }
      mean += patch.field.mesh().area(c) * w.value();
    }
    if (infinite) continue;  // mean is +inf, inequality holds trivially
    mean /= patch.field.mesh().total_area();
    const double margin = mean - wf.value();
    report.worst_margin = std::min(report.worst_margin, margin);
    if (margin < -tol) {
      ++report.violations;
      report.violating.push_back(static_cast<int>(i));
    }
  }
  return report;
}

PolyconvexReport polyconvex_combination_test(const DensityFn& candidate, const Matrix2d& F,
                                             const std::vector<Matrix2d>& trials, double tol) {
  const int n = static_cast<int>(trials.size());
  if (n == 0 || n > 8)
    throw std::invalid_argument("polyconvex_combination_test: trial set must have 1..8 matrices");
  PolyconvexReport report;

  // Equality system: minors match (5 rows) plus the weight sum (1 row).
  Eigen::MatrixXd A(6, n);
  for (int j = 0; j < n; ++j) {
    A.block<5, 1>(0, j) = minors(Matrix2d(trials[j]));
    A(5, j) = 1.0;
  }
  Eigen::Matrix<double, 6, 1> b;
  b.head<5>() = minors(F);
  b(5) = 1.0;
  const double scale = std::max(1.0, b.norm());

  // Exhaustive vertex enumeration over support subsets: a feasible basic
  // solution with nonnegative weights certifies feasibility.
  Eigen::VectorXd best;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> sup;
    for (int j = 0; j < n; ++j)
      if (mask & (1 << j)) sup.push_back(j);
    if (static_cast<int>(sup.size()) > 6) continue;
    Eigen::MatrixXd As(6, sup.size());
    for (size_t k = 0; k < sup.size(); ++k) As.col(k) = A.col(sup[k]);
    const Eigen::VectorXd mu = As.colPivHouseholderQr().solve(b);
    if ((As * mu - b).norm() > 1e-8 * scale) continue;
    if ((mu.array() < -1e-10).any()) continue;
    best = Eigen::VectorXd::Zero(n);
    for (size_t k = 0; k < sup.size(); ++k) best(sup[k]) = std::max(mu(k), 0.0);
    break;
  }
  if (best.size() == 0) return report;  // infeasible: skipped

  report.feasible = true;
  report.weights = best;
  const ExtendedReal wf = candidate(F);
  double combo = 0.0;
  for (int j = 0; j < n; ++j) {
    if (best(j) == 0.0) continue;
    const ExtendedReal wj = candidate(trials[j]);
    if (!wj.is_finite()) {
      report.margin = kInf;  // combination is +inf, inequality trivial
      return report;
    }
    combo += best(j) * wj.value();
  }
  if (!wf.is_finite()) {
    // Envelope infinite at F but finite combination matches the minors: flag.
    report.margin = -kInf;
    report.violated = true;
    return report;
  }
  report.margin = combo - wf.value();
  report.violated = report.margin < -tol;
  return report;
}

}  // namespace qcr
