#include "qcr/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcr {

namespace {

int gcd2(int a, int b) { return std::gcd(std::abs(a), std::abs(b)); }

bool canonical(const Eigen::Vector2i& v) {
  if (v.x() != 0) return v.x() > 0;
  return v.y() > 0;
}

}  // namespace

std::vector<LatticeDirection> default_direction_set(double max_norm) {
  const int r = static_cast<int>(std::floor(max_norm));
  std::vector<Eigen::Vector2i> factors;
  for (int x = -r; x <= r; ++x) {
    for (int y = -r; y <= r; ++y) {
      const Eigen::Vector2i v(x, y);
      if (v.isZero()) continue;
      if (v.squaredNorm() > max_norm * max_norm) continue;
      if (gcd2(x, y) != 1) continue;  // primitive
      if (!canonical(v)) continue;
      factors.push_back(v);
    }
  }
  std::vector<LatticeDirection> dirs;
  dirs.reserve(factors.size() * factors.size());
  for (const auto& a : factors)
    for (const auto& n : factors) dirs.push_back(LatticeDirection::outer(a, n));
  return dirs;
}

template <typename Scalar>
EnvelopeTable<Scalar> rank_one_convexify(const EnergyDensity& W, const MatrixGrid& grid,
                                         const std::vector<LatticeDirection>& directions,
                                         const LaminationOptions& opts) {
  for (int k = 1; k < 4; ++k)
    if (std::abs(grid.step[k] - grid.step[0]) > 1e-12 * grid.step[0])
      throw std::invalid_argument("rank_one_convexify: directions require equal grid steps");
  for (const auto& dir : directions) {
    const Matrix2d D = (Matrix2d() << dir.d[0], dir.d[1], dir.d[2], dir.d[3]).finished();
    if (D.isZero() || std::abs(determinant(D)) > 1e-12)
      throw std::invalid_argument("rank_one_convexify: directions must be nonzero rank one");
  }

  EnvelopeTable<Scalar> table;
  table.grid = grid;
  const auto n = grid.count;
  table.values.resize(grid.size());
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();

  // Initialize with the density; masked points (outside the det window or the
  // finite region of W) start and stay at +inf.
#pragma omp parallel for schedule(static)
  for (int i0 = 0; i0 < n[0]; ++i0) {
    Matrix2d F;
    F(0, 0) = grid.coord(0, i0);
    for (int i1 = 0; i1 < n[1]; ++i1) {
      F(0, 1) = grid.coord(1, i1);
      for (int i2 = 0; i2 < n[2]; ++i2) {
        F(1, 0) = grid.coord(2, i2);
        size_t idx = grid.index(i0, i1, i2, 0);
        for (int i3 = 0; i3 < n[3]; ++i3, ++idx) {
          F(1, 1) = grid.coord(3, i3);
          if (!grid.in_det_window(F)) {
            table.values[idx] = inf;
            continue;
          }
          const ExtendedReal w = W(F);
          table.values[idx] = w.is_finite() ? Scalar(w.value()) : inf;
        }
      }
    }
  }

  // Admissible split steps m1 + m2 <= reach.
  std::vector<std::pair<int, int>> pairs;
  for (int m1 = 1; m1 < opts.max_pair_reach; ++m1)
    for (int m2 = 1; m1 + m2 <= opts.max_pair_reach; ++m2) pairs.emplace_back(m1, m2);

  std::vector<Scalar> scratch(table.values.size());
  const long long off3 = 1;
  const long long off2 = n[3];
  const long long off1 = static_cast<long long>(n[2]) * n[3];
  const long long off0 = static_cast<long long>(n[1]) * off1;

  table.last_max_decrease = kInf;
  for (table.sweeps = 0; table.sweeps < opts.max_sweeps; ++table.sweeps) {
    double sweep_decrease = 0.0;
    for (const auto& dir : directions) {
      const auto& d = dir.d;
      const long long off = d[0] * off0 + d[1] * off1 + d[2] * off2 + d[3] * off3;
      const std::vector<Scalar>& in = table.values;
      std::vector<Scalar>& out = scratch;
      double dir_decrease = 0.0;

#pragma omp parallel for schedule(static) reduction(max : dir_decrease)
      for (int i0 = 0; i0 < n[0]; ++i0) {
        for (int i1 = 0; i1 < n[1]; ++i1) {
          for (int i2 = 0; i2 < n[2]; ++i2) {
            const size_t base = grid.index(i0, i1, i2, 0);
            // Start from the previous iterate on this line.
            for (int i3 = 0; i3 < n[3]; ++i3) out[base + i3] = in[base + i3];
            for (const auto& [m1, m2] : pairs) {
              // Bounds for the two endpoints in the three outer dimensions.
              const int a0 = i0 - m1 * d[0], b0 = i0 + m2 * d[0];
              const int a1 = i1 - m1 * d[1], b1 = i1 + m2 * d[1];
              const int a2 = i2 - m1 * d[2], b2 = i2 + m2 * d[2];
              if (a0 < 0 || a0 >= n[0] || b0 < 0 || b0 >= n[0]) continue;
              if (a1 < 0 || a1 >= n[1] || b1 < 0 || b1 >= n[1]) continue;
              if (a2 < 0 || a2 >= n[2] || b2 < 0 || b2 >= n[2]) continue;
              int lo3 = 0, hi3 = n[3] - 1;
              if (d[3] > 0) {
                lo3 = std::max(lo3, m1 * d[3]);
                hi3 = std::min(hi3, n[3] - 1 - m2 * d[3]);
              } else if (d[3] < 0) {
                lo3 = std::max(lo3, -m2 * d[3]);
                hi3 = std::min(hi3, n[3] - 1 + m1 * d[3]);
              }
              if (lo3 > hi3) continue;
              const double wm = m2, wp = m1;
              const double inv = 1.0 / (m1 + m2);
              const long long om = m1 * off, op = m2 * off;
              for (int i3 = lo3; i3 <= hi3; ++i3) {
                const size_t idx = base + i3;
                const Scalar cur = out[idx];
                if (cur == inf) continue;  // masked points stay +inf
                const double cand = (wm * double(in[idx - om]) + wp * double(in[idx + op])) * inv;
                const Scalar c = Scalar(cand);
                if (c < cur) out[idx] = c;
              }
            }
            for (int i3 = 0; i3 < n[3]; ++i3) {
              const double dec = double(in[base + i3]) - double(out[base + i3]);
              if (dec > dir_decrease && std::isfinite(dec)) dir_decrease = dec;
            }
          }
        }
      }
      table.values.swap(scratch);
      sweep_decrease = std::max(sweep_decrease, dir_decrease);
    }
    table.last_max_decrease = sweep_decrease;
    if (sweep_decrease < opts.tol) {
      ++table.sweeps;
      table.converged = true;
      break;
    }
  }
  return table;
}

template EnvelopeTable<float> rank_one_convexify<float>(const EnergyDensity&, const MatrixGrid&,
                                                        const std::vector<LatticeDirection>&,
                                                        const LaminationOptions&);
template EnvelopeTable<double> rank_one_convexify<double>(const EnergyDensity&, const MatrixGrid&,
                                                          const std::vector<LatticeDirection>&,
                                                          const LaminationOptions&);

}  // namespace qcr
