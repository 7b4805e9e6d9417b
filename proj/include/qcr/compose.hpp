#pragma once

#include "qcr/matrix_kernel.hpp"
#include "qcr/mesh.hpp"

namespace qcr {

struct ComposeResult {
  MeshField z;                 ///< on the patch mesh of phi, world coordinates
  double range_excess = 0.0;   ///< max(|v| - rho)/rho over vertices (<= tol on success)
  double det_integral_z = 0.0; ///< integral of det Dz over the patch
};

/// Local construction z = u o v on B' = B(a0, rho) with
///   v(x) = F^{-1} phi(x - a0) + a0,
/// where phi is a test field on the ball of radius rho centered at the origin
/// with boundary data F x.  Requires the range of F^{-1} phi to stay inside
/// closure(B_rho) (checked within `range_tol`); the composed per-cell gradient
/// is Du(v) Dv through the piecewise-affine chain rule, realized here by
/// interpolating u at the mapped patch vertices.  Traces on the patch
/// boundary agree with u at shared vertices exactly.
ComposeResult compose(const MeshField& u, const PointLocator& u_locator, const MeshField& phi,
                      const Matrix2d& F, const Vector2d& a0, double rho,
                      double range_tol = 1e-9);

}  // namespace qcr
