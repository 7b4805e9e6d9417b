#pragma once

#include <vector>

#include "qcr/matrix_kernel.hpp"

namespace qcr {

/// Solution of the twinning equation Q U1 - U2 = a (x) n with Q a rotation
/// and |n| = 1.
struct TwinningSolution {
  Matrix2d Q;
  Vector2d a;
  Vector2d n;

  Matrix2d rank_one() const { return a * n.transpose(); }
  /// Point on the rank-one segment between the wells: F_t = U2 + t a(x)n.
  Matrix2d segment_point(const Matrix2d& U2, double t) const {
    return U2 + t * rank_one();
  }
};

/// Solves Q U1 - U2 = a (x) n for rotations Q.  Requires det U1 = det U2 > 0.
/// Generically two solutions; throws std::domain_error("no rank-one
/// connection") when the rotation equation has no root and
/// std::invalid_argument("wells identical") when only the trivial a = 0
/// family exists.  Residual |Q U1 - U2 - a (x) n| <= 1e-10 on return.
std::vector<TwinningSolution> solve_twinning(const Matrix2d& U1, const Matrix2d& U2);

}  // namespace qcr
