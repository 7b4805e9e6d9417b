#include "qcr/twinning.hpp"

#include <cmath>
#include <stdexcept>

namespace qcr {

namespace {
constexpr double kResidualTol = 1e-10;
}

std::vector<TwinningSolution> solve_twinning(const Matrix2d& U1, const Matrix2d& U2) {
  const double d1 = determinant(U1), d2 = determinant(U2);
  if (!(d1 > 0.0 && d2 > 0.0))
    throw std::invalid_argument("solve_twinning: wells must have positive determinant");
  if (std::abs(d1 - d2) > 1e-10 * std::max(d1, d2))
    throw std::invalid_argument("solve_twinning: wells must have equal determinant");

  // Q U1 - U2 is rank one iff det(Q U1 - U2) = 0, i.e.
  //   d1 + d2 - tr(Q M) = 0 with M = cof(U1) U2^T,
  // which is a linear equation in (cos, sin) of the rotation angle.
  const Matrix2d M = cofactor(U1) * U2.transpose();
  const double A = M(0, 0) + M(1, 1);
  const double B = M(0, 1) - M(1, 0);
  const double r = d1 + d2;
  const double rho = std::sqrt(A * A + B * B);
  const double scale = std::max({1.0, U1.norm() * U2.norm()});
  if (rho < r - 1e-12 * scale)
    throw std::domain_error("solve_twinning: no rank-one connection between the wells");

  const double phase = std::atan2(B, A);
  const double delta = std::acos(std::clamp(r / rho, -1.0, 1.0));

  std::vector<TwinningSolution> out;
  for (const double alpha : {phase + delta, phase - delta}) {
    TwinningSolution sol;
    sol.Q = rotation2(alpha);
    const Matrix2d C = sol.Q * U1 - U2;
    if (C.norm() <= 1e-12 * scale) continue;  // trivial a = 0 family
    // Rank-one factorization C = a n^T: n is the dominant eigenvector of C^T C.
    const Matrix2d S = C.transpose() * C;
    const double half_tr = (S(0, 0) + S(1, 1)) / 2.0;
    const double disc = std::sqrt(std::max(half_tr * half_tr - determinant(S), 0.0));
    const double ev = half_tr + disc;
    Vector2d n(S(0, 1), ev - S(0, 0));
    if (n.norm() < 1e-14 * ev) n = Vector2d(ev - S(1, 1), S(1, 0));
    if (n.norm() < 1e-14 * std::max(ev, 1.0)) n = Vector2d(1.0, 0.0);
    n.normalize();
    if (n.x() < 0.0 || (n.x() == 0.0 && n.y() < 0.0)) n = -n;  // canonical sign
    sol.a = C * n;
    sol.n = n;
    if ((C - sol.rank_one()).norm() > kResidualTol * std::max(1.0, C.norm()))
      throw std::domain_error("solve_twinning: residual above tolerance (wells not rank-one connected)");
    // Drop a duplicate from a tangent root (delta == 0).
    bool dup = false;
    for (const auto& s : out) dup = dup || (s.Q - sol.Q).norm() < 1e-12;
    if (!dup) out.push_back(sol);
  }
  if (out.empty()) throw std::invalid_argument("solve_twinning: wells identical");
  return out;
}

}  // namespace qcr
