#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qcr/matrix_kernel.hpp"

namespace qcr {

/// Lattice in 2x2 matrix space (one axis per entry, row-major order
/// F00, F01, F10, F11) with a determinant window masking the trusted region;
/// lattice points outside the window are held at +inf.
struct MatrixGrid {
  std::array<double, 4> lo{-3.0, -3.0, -3.0, -3.0};
  std::array<double, 4> step{0.05, 0.05, 0.05, 0.05};
  std::array<int, 4> count{121, 121, 121, 121};
  double det_min = -kInf;
  double det_max = kInf;

  static MatrixGrid cube(double bound, double step, double det_min, double det_max);

  size_t size() const {
    return size_t(count[0]) * count[1] * count[2] * count[3];
  }
  double coord(int dim, int i) const { return lo[dim] + step[dim] * i; }
  Matrix2d matrix_at(int i0, int i1, int i2, int i3) const {
    Matrix2d F;
    F << coord(0, i0), coord(1, i1), coord(2, i2), coord(3, i3);
    return F;
  }
  size_t index(int i0, int i1, int i2, int i3) const {
    return ((size_t(i0) * count[1] + i1) * count[2] + i2) * count[3] + i3;
  }
  bool in_det_window(const Matrix2d& F) const {
    const double d = determinant(F);
    return d >= det_min && d <= det_max;
  }
  /// Nearest lattice point; returns false if F is off the lattice beyond tol.
  bool locate(const Matrix2d& F, std::array<int, 4>& idx, double tol = 1e-9) const;
};

/// Grid-sampled convexification with iteration metadata.  Values are
/// nonincreasing across sweeps at every lattice point and bounded by the
/// initial density values; +inf marks masked points.
template <typename Scalar>
struct EnvelopeTable {
  MatrixGrid grid;
  std::vector<Scalar> values;
  int sweeps = 0;
  double last_max_decrease = kInf;
  bool converged = false;

  Scalar at(int i0, int i1, int i2, int i3) const { return values[grid.index(i0, i1, i2, i3)]; }
};

using EnvelopeTableF = EnvelopeTable<float>;
using EnvelopeTableD = EnvelopeTable<double>;

/// Binary serialization: header (dimensions, ranges, steps, iteration count)
/// followed by row-major 64-bit floats with +inf as the IEEE infinity.
template <typename Scalar>
void save_envelope_table(const EnvelopeTable<Scalar>& table, const std::string& path);
EnvelopeTableD load_envelope_table(const std::string& path);

/// CSV export (index, entries, value) for plotting.
template <typename Scalar>
void export_envelope_table_csv(const EnvelopeTable<Scalar>& table, const std::string& path,
                               size_t max_rows = 0);

}  // namespace qcr
