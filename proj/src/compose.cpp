#include "qcr/compose.hpp"

#include <stdexcept>

namespace qcr {

ComposeResult compose(const MeshField& u, const PointLocator& u_locator, const MeshField& phi,
                      const Matrix2d& F, const Vector2d& a0, double rho, double range_tol) {
  const Matrix2d Finv = F.inverse();
  const TriMesh& pm = phi.mesh();

  double excess = 0.0;
  std::vector<Vector2d> vals;
  vals.reserve(pm.num_vertices());
  for (int v = 0; v < pm.num_vertices(); ++v) {
    const Vector2d w = Finv * phi.value(v);  // phi lives on the origin-centered ball
    excess = std::max(excess, (w.norm() - rho) / rho);
    // Clamp marginal overshoot back to the closed ball before evaluating u.
    const Vector2d w_clamped = w.norm() > rho ? (w * (rho / w.norm())).eval() : w;
    vals.push_back(evaluate(u, u_locator, w_clamped + a0));
  }
  if (excess > range_tol)
    throw std::domain_error("compose: range of F^{-1} phi leaves closure(B_rho)");

  // World-coordinate patch mesh (phi's mesh shifted by a0).
  std::vector<Vector2d> verts = pm.vertices();
  for (auto& p : verts) p += a0;
  auto mesh = std::make_shared<TriMesh>(std::move(verts),
                                        std::vector<std::array<int, 3>>(pm.cells()));
  ComposeResult res{MeshField(std::move(mesh), std::move(vals)), excess, 0.0};
  res.det_integral_z = integral_det(res.z);
  return res;
}

}  // namespace qcr
