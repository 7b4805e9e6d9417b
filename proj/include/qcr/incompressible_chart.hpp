#pragma once

#include <vector>

#include "qcr/energy.hpp"

namespace qcr {

/// Chart of the volume-preserving slice {det F = 1} in 2D:
///   F = R(psi) R(chi) diag(1/lam, lam) R(chi)^T
/// with psi the polar rotation angle (period 2 pi), chi the stretch axis
/// (period pi) and lam >= 1 the largest singular value.  A 4D entry lattice
/// never lands on the measure-zero slice; rank-one moves are taken inside the
/// slice instead (shears, along which the determinant is constant).
struct ChartGrid {
  int n_psi = 8;
  int n_chi = 16;
  int n_lam = 41;
  double lam_max = 3.0;

  double lam(int k) const { return 1.0 + (lam_max - 1.0) * k / (n_lam - 1); }
  size_t size() const { return size_t(n_psi) * n_chi * n_lam; }
  size_t index(int ip, int ic, int il) const {
    return (size_t(ip) * n_chi + ic) * n_lam + il;
  }
  Matrix2d matrix_at(int ip, int ic, int il) const;
};

struct ChartCoords {
  double psi = 0.0;
  double chi = 0.0;
  double lam = 1.0;
};

/// Polar/spectral chart coordinates of a matrix with det F = 1.
ChartCoords chart_coordinates(const Matrix2d& F);

struct ChartTable {
  ChartGrid grid;
  std::vector<double> values;
  int sweeps = 0;
  double last_max_decrease = kInf;
  bool converged = false;

  /// Trilinear lookup (periodic in the angles, +inf beyond lam_max).
  double lookup(const Matrix2d& F) const;
};

struct ChartConvexifyOptions {
  int n_angles = 16;      ///< shear directions per point
  double step = 0.1;      ///< base step along the rank-one lines
  int max_step = 30;      ///< symmetric splits up to max_step * step
  int pair_reach = 12;    ///< asymmetric splits with j1 + j2 <= pair_reach
  double tol = 1e-4;
  int max_sweeps = 200;
};

/// Lamination convexification of an incompressible density on the chart:
/// rank-one moves F -> F (Id + s m (x) n), m _|_ n, stay in the slice exactly,
/// and endpoint values are read back through the chart (off-chart reads clamp
/// to +inf).
ChartTable incompressible_rank_one_convexify(const EnergyDensity& W, const ChartGrid& grid,
                                             const ChartConvexifyOptions& opts = {});

}  // namespace qcr
