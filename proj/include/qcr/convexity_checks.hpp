#pragma once

#include <functional>
#include <vector>

#include "qcr/extended_real.hpp"
#include "qcr/laminate.hpp"
#include "qcr/matrix_kernel.hpp"

namespace qcr {

using DensityFn = std::function<ExtendedReal(const Matrix2d&)>;

struct JensenReport {
  int tested = 0;
  int violations = 0;
  double worst_margin = kInf;  ///< min over laminates of mean(W(Dphi)) - W(F)
  std::vector<int> violating;  ///< indices of violating laminates
};

/// Jensen-type quasiconvexity test: for each laminate (built as a test field
/// with affine boundary data F on the unit ball) asserts
///   mean over the ball of Wqc(Dphi) >= Wqc(F) - tol.
/// A mean of +inf never violates.  Violations demonstrate that the candidate
/// is not quasiconvex.
JensenReport quasiconvexity_jensen_test(const DensityFn& candidate,
                                        const std::vector<LaminateSpec>& laminates, double tol);

struct PolyconvexReport {
  bool feasible = false;        ///< the minors-matching weight system has a solution
  double margin = 0.0;          ///< sum mu_i W(F_i) - W(F) (violation if < -tol)
  bool violated = false;
  Eigen::VectorXd weights;
};

/// Necessary polyconvexity inequality: finds weights mu >= 0, sum mu = 1 with
/// sum mu_i M(F_i) = M(F) (minors vectors) by exhaustive vertex enumeration of
/// the small equality system, and checks sum mu_i W(F_i) >= W(F) - tol when
/// feasible.  Infeasible systems are reported separately (skipped).
PolyconvexReport polyconvex_combination_test(const DensityFn& candidate, const Matrix2d& F,
                                             const std::vector<Matrix2d>& trials, double tol);

}  // namespace qcr
