#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace qcr {

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

using Matrix2d = Eigen::Matrix2d;
using Matrix3d = Eigen::Matrix3d;
using Vector2d = Eigen::Vector2d;
using Vector3d = Eigen::Vector3d;

/// Minors vector: row-major entries followed by the determinant (n=2, length
/// 5), or row-major entries, row-major cofactor entries, determinant (n=3,
/// length 19).  All consumers of polyconvexity-type embeddings rely on this
/// fixed order.
template <typename Scalar>
using MinorsVector2 = Eigen::Matrix<Scalar, 5, 1>;
template <typename Scalar>
using MinorsVector3 = Eigen::Matrix<Scalar, 19, 1>;

template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& F) {
  static_assert(Derived::RowsAtCompileTime == Derived::ColsAtCompileTime);
  if constexpr (Derived::RowsAtCompileTime == 2) {
    return F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
  } else {
    // Cofactor expansion along the first row.
    return F(0, 0) * (F(1, 1) * F(2, 2) - F(1, 2) * F(2, 1)) -
           F(0, 1) * (F(1, 0) * F(2, 2) - F(1, 2) * F(2, 0)) +
           F(0, 2) * (F(1, 0) * F(2, 1) - F(1, 1) * F(2, 0));
  }
}

/// Cofactor matrix, satisfying cof(F) * F^T = det(F) * Id.
template <typename Scalar>
Matrix2<Scalar> cofactor(const Matrix2<Scalar>& F) {
  Matrix2<Scalar> C;
  C << F(1, 1), -F(1, 0), -F(0, 1), F(0, 0);
  return C;
}

template <typename Scalar>
Matrix3<Scalar> cofactor(const Matrix3<Scalar>& F) {
  Matrix3<Scalar> C;
  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    for (int j = 0; j < 3; ++j) {
      const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      C(i, j) = F(i1, j1) * F(i2, j2) - F(i1, j2) * F(i2, j1);
    }
  }
  return C;
}

template <typename Scalar>
MinorsVector2<Scalar> minors(const Matrix2<Scalar>& F) {
  MinorsVector2<Scalar> m;
  m << F(0, 0), F(0, 1), F(1, 0), F(1, 1), determinant(F);
  return m;
}

template <typename Scalar>
MinorsVector3<Scalar> minors(const Matrix3<Scalar>& F) {
  MinorsVector3<Scalar> m;
  const Matrix3<Scalar> C = cofactor(F);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(3 * i + j) = F(i, j);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(9 + 3 * i + j) = C(i, j);
  m(18) = determinant(F);
  return m;
}

/// Singular values of a 2x2 matrix in nondecreasing order, computed from the
/// invariants |F|^2 and det F.  Exact for orthogonal and diagonal inputs.
template <typename Scalar>
Vector2<Scalar> singular_values(const Matrix2<Scalar>& F) {
  const Scalar n2 = F.squaredNorm();
  const Scalar d = determinant(F);
  using std::abs;
  using std::sqrt;
  const Scalar s = sqrt(std::max<Scalar>(n2 + 2 * abs(d), 0));  // s1 + s2
  const Scalar t = sqrt(std::max<Scalar>(n2 - 2 * abs(d), 0));  // s2 - s1
  Vector2<Scalar> sv;
  sv << (s - t) / 2, (s + t) / 2;
  return sv;
}

namespace detail {

/// Cyclic Jacobi eigenvalue iteration for a symmetric 3x3 matrix.  Converges
/// quadratically; the off-diagonal norm is driven below tol * |A|.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> jacobi_symmetric_eigenvalues(Matrix3<Scalar> A, Scalar tol = Scalar(1e-14)) {
  const Scalar scale = A.norm();
  if (scale == Scalar(0)) return Eigen::Matrix<Scalar, 3, 1>::Zero();
  for (int sweep = 0; sweep < 64; ++sweep) {
    Scalar off = Scalar(0);
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q) off += A(p, q) * A(p, q);
    if (std::sqrt(Scalar(2) * off) <= tol * scale) break;
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (A(p, q) == Scalar(0)) continue;
        const Scalar theta = (A(q, q) - A(p, p)) / (2 * A(p, q));
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Scalar c = Scalar(1) / std::sqrt(t * t + 1);
        const Scalar s = t * c;
        Eigen::JacobiRotation<Scalar> rot(c, s);
        A.applyOnTheLeft(p, q, rot.transpose());
        A.applyOnTheRight(p, q, rot);
      }
    }
  }
  Eigen::Matrix<Scalar, 3, 1> ev(A(0, 0), A(1, 1), A(2, 2));
  std::sort(ev.data(), ev.data() + 3);
  return ev;
}

}  // namespace detail

/// Singular values of a 3x3 matrix in nondecreasing order, via a Jacobi
/// eigen-decomposition of F^T F.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> singular_values(const Matrix3<Scalar>& F) {
  const Matrix3<Scalar> FtF = F.transpose() * F;
  Eigen::Matrix<Scalar, 3, 1> ev = detail::jacobi_symmetric_eigenvalues(FtF);
  for (int i = 0; i < 3; ++i) ev(i) = std::sqrt(std::max<Scalar>(ev(i), 0));
  return ev;
}

/// max over R in SO(2) of <R, G>.  Attained by the rotation from the polar
/// decomposition when det G > 0.
template <typename Scalar>
Scalar max_trace_over_rotations(const Matrix2<Scalar>& G) {
  const Scalar a = G(0, 0) + G(1, 1);
  const Scalar b = G(1, 0) - G(0, 1);
  return std::sqrt(a * a + b * b);
}

template <typename Scalar>
Scalar max_trace_over_rotations(const Matrix3<Scalar>& G) {
  const Eigen::Matrix<Scalar, 3, 1> sv = singular_values(G);
  const Scalar s = sv.sum();
  return determinant(G) >= Scalar(0) ? s : s - 2 * sv(0);
}

/// Squared Frobenius distance from F to the well SO(n) * U.  Requires
/// det U > 0.  Zero exactly on the well, rotation invariant on the left.
template <typename Scalar, int N>
Scalar dist_sq_to_well(const Eigen::Matrix<Scalar, N, N>& F, const Eigen::Matrix<Scalar, N, N>& U) {
  if (!(determinant(U) > Scalar(0)))
    throw std::invalid_argument("dist_sq_to_well: well matrix U must have det U > 0");
  // min_R |F - R U|^2 = |F|^2 + |U|^2 - 2 max_R <R, F U^T>.
  const Eigen::Matrix<Scalar, N, N> G = F * U.transpose();
  const Scalar d2 = F.squaredNorm() + U.squaredNorm() - 2 * max_trace_over_rotations(G);
  return std::max<Scalar>(d2, 0);
}

/// Rotation by angle t.
template <typename Scalar>
Matrix2<Scalar> rotation2(Scalar t) {
  Matrix2<Scalar> R;
  R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return R;
}

}  // namespace qcr
