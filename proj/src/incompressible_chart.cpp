#include "qcr/incompressible_chart.hpp"

#include <algorithm>
#include <cmath>

namespace qcr {

Matrix2d ChartGrid::matrix_at(int ip, int ic, int il) const {
  const double psi = 2.0 * M_PI * ip / n_psi;
  const double chi = M_PI * ic / n_chi;
  const double l = lam(il);
  Matrix2d S = Matrix2d::Zero();
  S(0, 0) = 1.0 / l;
  S(1, 1) = l;
  const Matrix2d Rchi = rotation2(chi);
  return rotation2(psi) * Rchi * S * Rchi.transpose();
}

ChartCoords chart_coordinates(const Matrix2d& F) {
  ChartCoords c;
  // Polar rotation for det F > 0.
  c.psi = std::atan2(F(1, 0) - F(0, 1), F(0, 0) + F(1, 1));
  if (c.psi < 0.0) c.psi += 2.0 * M_PI;
  const Matrix2d S = rotation2(-c.psi) * F;  // symmetric, det ~ 1
  const double half_tr = (S(0, 0) + S(1, 1)) / 2.0;
  c.lam = half_tr + std::sqrt(std::max(half_tr * half_tr - determinant(S), 0.0));
  c.lam = std::max(c.lam, 1.0);
  c.chi = 0.5 * std::atan2(2.0 * S(0, 1), S(0, 0) - S(1, 1));
  if (c.chi < 0.0) c.chi += M_PI;
  return c;
}

double ChartTable::lookup(const Matrix2d& F) const {
  const ChartCoords c = chart_coordinates(F);
  if (c.lam > grid.lam_max * (1.0 + 1e-12)) return kInf;
  const double tp = c.psi / (2.0 * M_PI) * grid.n_psi;
  const double tc = c.chi / M_PI * grid.n_chi;
  const double tl = (c.lam - 1.0) / (grid.lam_max - 1.0) * (grid.n_lam - 1);
  const int ip = static_cast<int>(std::floor(tp));
  const int ic = static_cast<int>(std::floor(tc));
  const int il = std::min(static_cast<int>(std::floor(tl)), grid.n_lam - 2);
  const double fp = tp - ip, fc = tc - ic, fl = std::max(tl - il, 0.0);
  double v = 0.0;
  for (int dp = 0; dp < 2; ++dp) {
    for (int dc = 0; dc < 2; ++dc) {
      for (int dl = 0; dl < 2; ++dl) {
        const int jp = (ip + dp) % grid.n_psi;
        const int jc = (ic + dc) % grid.n_chi;
        const int jl = std::min(il + dl, grid.n_lam - 1);
        const double w = (dp ? fp : 1.0 - fp) * (dc ? fc : 1.0 - fc) * (dl ? fl : 1.0 - fl);
        if (w == 0.0) continue;
        const double val = values[grid.index(jp, jc, jl)];
        if (!std::isfinite(val)) return kInf;
        v += w * val;
      }
    }
  }
  return v;
}

ChartTable incompressible_rank_one_convexify(const EnergyDensity& W, const ChartGrid& grid,
                                             const ChartConvexifyOptions& opts) {
  ChartTable table;
  table.grid = grid;
  table.values.resize(grid.size());
  for (int ip = 0; ip < grid.n_psi; ++ip)
    for (int ic = 0; ic < grid.n_chi; ++ic)
      for (int il = 0; il < grid.n_lam; ++il) {
        const ExtendedReal w = W(grid.matrix_at(ip, ic, il));
        table.values[grid.index(ip, ic, il)] = w.is_finite() ? w.value() : kInf;
      }

  std::vector<std::pair<double, double>> splits;
  for (int j = 1; j <= opts.max_step; ++j)
    splits.emplace_back(j * opts.step, j * opts.step);
  for (int j1 = 1; j1 <= opts.pair_reach; ++j1)
    for (int j2 = 1; j1 + j2 <= opts.pair_reach; ++j2)
      if (j1 != j2) splits.emplace_back(j1 * opts.step, j2 * opts.step);

  std::vector<double> scratch(table.values.size());
  for (table.sweeps = 0; table.sweeps < opts.max_sweeps; ++table.sweeps) {
    double max_dec = 0.0;
    const std::vector<double>& in = table.values;
    ChartTable view;  // lookups against the previous iterate
    view.grid = grid;
    view.values = in;
#pragma omp parallel for schedule(static) reduction(max : max_dec)
    for (int ip = 0; ip < grid.n_psi; ++ip) {
      for (int ic = 0; ic < grid.n_chi; ++ic) {
        for (int il = 0; il < grid.n_lam; ++il) {
          const size_t idx = grid.index(ip, ic, il);
          double cur = in[idx];
          if (!std::isfinite(cur)) {
            scratch[idx] = cur;
            continue;
          }
          const Matrix2d F = grid.matrix_at(ip, ic, il);
          for (int ia = 0; ia < opts.n_angles; ++ia) {
            const double phi = M_PI * ia / opts.n_angles;
            const Vector2d nd(std::cos(phi), std::sin(phi));
            const Vector2d md(-nd.y(), nd.x());
            Matrix2d D = (F * md) * nd.transpose();  // volume-preserving rank-one line
            const double nrm = D.norm();
            if (nrm < 1e-14) continue;
            D /= nrm;
            for (const auto& [s1, s2] : splits) {
              const double vm = view.lookup((F - s1 * D).eval());
              if (!std::isfinite(vm)) continue;
              const double vp = view.lookup((F + s2 * D).eval());
              if (!std::isfinite(vp)) continue;
              const double cand = (s2 * vm + s1 * vp) / (s1 + s2);
              if (cand < cur) cur = cand;
            }
          }
          scratch[idx] = cur;
          const double dec = in[idx] - cur;
          if (std::isfinite(dec) && dec > max_dec) max_dec = dec;
        }
      }
    }
    table.values.swap(scratch);
    table.last_max_decrease = max_dec;
    if (max_dec < opts.tol) {
      ++table.sweeps;
      table.converged = true;
      break;
    }
  }
  return table;
}

}  // namespace qcr
