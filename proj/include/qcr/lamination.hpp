#pragma once

#include <vector>

#include "qcr/energy.hpp"
#include "qcr/envelope_table.hpp"

namespace qcr {

/// Rank-one lattice direction a (x) n with integer vectors a, n; the lattice
/// displacement of F +- s a(x)n is the integer matrix itself when all grid
/// steps are equal.
struct LatticeDirection {
  std::array<int, 4> d{0, 0, 0, 0};  // row-major a(x)n entries

  static LatticeDirection outer(const Eigen::Vector2i& a, const Eigen::Vector2i& n) {
    return LatticeDirection{{a.x() * n.x(), a.x() * n.y(), a.y() * n.x(), a.y() * n.y()}};
  }
};

/// All rank-one directions a (x) n with |a|, |n| <= max_norm lattice units,
/// deduplicated up to scaling (primitive canonical factors).
std::vector<LatticeDirection> default_direction_set(double max_norm = 2.0);

struct LaminationOptions {
  double tol = 1e-3;
  int max_sweeps = 50;
  int max_pair_reach = 4;  ///< admissible steps: m1 + m2 <= reach
};

/// Lamination (rank-one) convexification on the lattice:
///   W_{k+1}(F) = min over directions and lattice-representable splits of the
///   convex combination of W_k at the two endpoints,
/// with off-grid endpoint reads clamped to +inf (conservative: the table is
/// an upper bound for the rank-one convexification restricted to the box).
/// Stops when the largest pointwise decrease of a sweep drops below tol or
/// max_sweeps is reached; the result records which.  Deterministic: identical
/// inputs produce bitwise-identical tables regardless of thread count.
template <typename Scalar>
EnvelopeTable<Scalar> rank_one_convexify(const EnergyDensity& W, const MatrixGrid& grid,
                                         const std::vector<LatticeDirection>& directions,
                                         const LaminationOptions& opts = {});

extern template EnvelopeTable<float> rank_one_convexify<float>(const EnergyDensity&,
                                                               const MatrixGrid&,
                                                               const std::vector<LatticeDirection>&,
                                                               const LaminationOptions&);
extern template EnvelopeTable<double> rank_one_convexify<double>(
    const EnergyDensity&, const MatrixGrid&, const std::vector<LatticeDirection>&,
    const LaminationOptions&);

}  // namespace qcr
