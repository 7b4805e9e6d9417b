#include "qcr/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "qcr/compose.hpp"
#include "qcr/cover.hpp"
#include "qcr/laminate.hpp"

namespace qcr {

namespace {

struct BaseCells {
  std::vector<double> area;
  std::vector<double> remaining;  // area not yet absorbed by a patch
  std::vector<Matrix2d> grad;
  std::vector<double> w;    // finite-part density value
  std::vector<double> wqc;  // envelope value
  std::vector<double> crit;  // qualification integrand (set per mode)
};

// Overlap quadrature of a convex polygon against the base cells near it.
struct Overlap {
  std::vector<std::pair<int, double>> cells;  // (cell, area)
  double total = 0.0;
};

Overlap polygon_overlap(const TriMesh& mesh, const std::vector<Vector2d>& poly,
                        const Vector2d& center, double radius) {
  Overlap ov;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vector2d b = mesh.barycenter(c);
    const double reach = radius + std::sqrt(mesh.area(c));  // cell diameter bound
    if ((b - center).norm() > reach * 1.8) continue;
    const double a = cell_polygon_overlap(mesh, c, poly);
    if (a > 0.0) {
      ov.cells.emplace_back(c, a);
      ov.total += a;
    }
  }
  return ov;
}

}  // namespace

RecoveryResult recovery_sequence(const MeshField& u, const EnergyDensity& W,
                                 const std::function<ExtendedReal(const Matrix2d&)>& Wqc,
                                 double eta, RecoveryMode mode, const RecoveryOptions& opts) {
  RecoveryResult result;
  const TriMesh& mesh = u.mesh();
  const bool incompressible = mode == RecoveryMode::kIncompressible;
  const bool use_translation = !incompressible;
  const double p = W.growth_exponent();
  const ThetaPenalty* theta = W.theta();

  // Precompute per-cell data and check the admissibility preconditions.
  BaseCells base;
  base.area.resize(mesh.num_cells());
  base.remaining.resize(mesh.num_cells());
  base.grad.resize(mesh.num_cells());
  base.w.resize(mesh.num_cells());
  base.wqc.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    base.area[c] = mesh.area(c);
    base.remaining[c] = mesh.area(c);
    base.grad[c] = u.gradient(c);
    const double det = determinant(base.grad[c]);
    if (incompressible) {
      if (std::abs(det - 1.0) > kIncompressibleTol)
        throw std::invalid_argument("recovery_sequence: u must satisfy det Du = 1 per cell");
    } else if (!(det > 0.0)) {
      throw std::invalid_argument("recovery_sequence: u must satisfy det Du > 0 per cell");
    }
    base.w[c] = W.finite_part(base.grad[c]).value();
    base.wqc[c] = Wqc(base.grad[c]).value();
  }

  result.domain_measure = mesh.total_area();
  result.relaxed_reference = 0.0;
  double patch_energy_total = 0.0;
  double drift_sq = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) result.relaxed_reference += base.area[c] * base.wqc[c];
  result.initial_energy = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) result.initial_energy += base.area[c] * base.w[c];

  auto current_energy = [&]() {
    double e = patch_energy_total;
    for (int c = 0; c < mesh.num_cells(); ++c) e += base.remaining[c] * base.w[c];
    return e;
  };

  const auto locator = PointLocator(u.mesh_ptr());
  const double cap = opts.radius_cap > 0.0 ? opts.radius_cap : eta;
  const double delta = eta * opts.delta_factor;

  // Covering raster over the (rectangular) mesh bounding box.
  Vector2d lo(kInf, kInf), hi = -lo;
  for (const auto& v : mesh.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  CoverState cover(lo, hi, opts.raster, opts.raster);

  const TwoWellModel* two_well = W.two_well();
  const NematicModel* nematic = W.nematic();

  for (int round = 1; round <= opts.max_rounds; ++round) {
    VitaliRoundOptions vopts;
    vopts.remove = false;  // cores are removed per ball after construction
    vopts.max_balls = opts.max_balls_per_round;
    VitaliRoundResult vr = vitali_round(
        cover, [&](const Vector2d&) { return cap; },
        incompressible ? CoverMode::kIncompressible : CoverMode::kOrientation, vopts);

    RecoveryRoundLog log;
    log.round = round;
    log.relaxed_reference = result.relaxed_reference;

    for (const auto& ball : vr.balls) {
      const double rho = incompressible ? ball.radius : ball.radius / 2.0;
      const auto hit = locator.locate(ball.center);
      if (hit.cell < 0) {
        ++log.skipped;
        cover.remove_disk(ball.center, rho);
        continue;
      }
      const Matrix2d F = base.grad[hit.cell];

      // Lebesgue-point qualification, cell-averaged over the ball.
      const auto ball_poly = regular_polygon(ball.center, ball.radius, opts.ngon);
      const Overlap ball_ov = polygon_overlap(mesh, ball_poly, ball.center, ball.radius);
      double crit_integral = 0.0;
      const double wF = W.finite_part(F).value();
      const double thF = theta != nullptr ? (*theta)(determinant(F)).value() : 0.0;
      for (const auto& [c, a] : ball_ov.cells) {
        double crit;
        if (mode == RecoveryMode::kSubmultiplicative) {
          crit = (base.grad[c] - F).norm() + std::abs(base.w[c] - wF);
        } else {
          const double th =
              theta != nullptr ? (*theta)(determinant(base.grad[c])).value() : 0.0;
          crit = std::pow((base.grad[c] - F).norm(), p) + std::abs(th - thF);
        }
        crit_integral += a * crit;
      }
      const double crit_mean = ball_ov.total > 0.0 ? crit_integral / ball_ov.total : kInf;
      if (crit_mean > delta) {
        ++log.skipped;
        cover.remove_disk(ball.center, rho);
        continue;
      }

      // Test-function provider for the boundary gradient F.
      std::optional<LaminateSpec> spec;
      if (two_well != nullptr) spec = twin_laminate_for(*two_well, F, opts.stripes);
      if (nematic != nullptr) {
        const Eigen::VectorXd& g = nematic->gamma;
        spec = nematic_laminate_for(g(1), F, opts.stripes);
      }
      const double wqcF = Wqc(F).value();
      if (!spec.has_value()) {
        // No oscillation available; keeping u in the ball is admissible only
        // when the density already meets the envelope bound there.
        if (wF <= wqcF + eta) {
          cover.remove_disk(ball.center, rho);
        } else {
          ++log.skipped;
          cover.remove_disk(ball.center, rho);
        }
        continue;
      }

      // Build the oscillating test field, adapting the layer if the
      // orientation constraint fails inside it.
      LaminateSpec sp = *spec;
      LaminatePatch patch = build_laminate(sp, rho);
      for (int retry = 0; retry < 2 && patch.min_det <= 0.0; ++retry) {
        sp.layer_fraction = 2.0 * sp.effective_layer_fraction();
        patch = build_laminate(sp, rho);
      }
      if (patch.min_det <= 0.0) {
        ++log.skipped;
        cover.remove_disk(ball.center, rho);
        continue;
      }

      // Translation selection (orientation modes).
      Vector2d a0 = ball.center;
      if (use_translation) {
        const Matrix2d Finv = F.inverse();
        std::vector<double> g_cells(patch.field.mesh().num_cells());
        bool g_ok = true;
        for (int c = 0; c < patch.field.mesh().num_cells(); ++c) {
          const Matrix2d Dv = Finv * patch.field.gradient(c);
          double gval;
          if (mode == RecoveryMode::kSubmultiplicative) {
            const ExtendedReal wv = W.finite_part((Dv).eval());
            gval = 1.0 + wv.value();
          } else {
            const ExtendedReal th =
                theta != nullptr ? (*theta)(determinant(Dv)) : ExtendedReal(0.0);
            gval = 1.0 + th.value();
          }
          if (!std::isfinite(gval)) {
            g_ok = false;
            break;
          }
          g_cells[c] = gval;
        }
        if (!g_ok) {
          ++log.skipped;
          cover.remove_disk(ball.center, rho);
          continue;
        }
        if (crit_integral > 1e-14 * std::max(1.0, ball_ov.total)) {
          std::vector<Vector2d> psi_vals;
          psi_vals.reserve(patch.field.mesh().num_vertices());
          for (int v = 0; v < patch.field.mesh().num_vertices(); ++v)
            psi_vals.push_back(Finv * patch.field.value(v));
          MeshField psi(patch.field.mesh_ptr(), std::move(psi_vals));
          auto f_eval = [&](const Vector2d& x) {
            const auto h = locator.locate(x, 1e-6);
            if (h.cell < 0) return 0.0;
            if (mode == RecoveryMode::kSubmultiplicative)
              return (base.grad[h.cell] - F).norm() + std::abs(base.w[h.cell] - wF);
            const double th =
                theta != nullptr ? (*theta)(determinant(base.grad[h.cell])).value() : 0.0;
            return std::pow((base.grad[h.cell] - F).norm(), p) + std::abs(th - thF);
          };
          const TranslationResult tr =
              select_translation(f_eval, crit_integral, patch.field.mesh(), g_cells, psi,
                                 ball.center, rho, opts.translation);
          if (!tr.found) {
            ++log.skipped;
            cover.remove_disk(ball.center, rho);
            continue;
          }
          a0 = tr.a0;
        }
      }

      // Compose z = u o v on B(a0, rho) and run the certificates.
      ComposeResult cz = [&] {
        try {
          return compose(u, locator, patch.field, F, a0, rho, 1e-9);
        } catch (const std::exception&) {
          return ComposeResult{MeshField(patch.field.mesh_ptr(), {}), kInf, 0.0};
        }
      }();
      if (cz.range_excess > 1e-9) {
        ++log.skipped;
        cover.remove_disk(ball.center, rho);
        continue;
      }

      const auto core_poly = regular_polygon(a0, rho, opts.ngon);
      const Overlap core_ov = polygon_overlap(mesh, core_poly, a0, rho);

      // Determinant constraint, per cell (exact assertion).
      double min_det = kInf, max_violation = 0.0;
      for (int c = 0; c < cz.z.mesh().num_cells(); ++c) {
        const double dz = determinant(cz.z.gradient(c));
        min_det = std::min(min_det, dz);
        if (incompressible && !patch.layer_cell[c])
          max_violation = std::max(max_violation, std::abs(dz - 1.0));
      }
      double det_du_integral = 0.0;
      for (const auto& [c, a] : core_ov.cells) det_du_integral += a * determinant(base.grad[c]);
      const double null_defect =
          std::abs(cz.det_integral_z - det_du_integral) / (M_PI * rho * rho);

      // Per-ball energy certificate.
      double patch_energy = 0.0;
      for (int c = 0; c < cz.z.mesh().num_cells(); ++c)
        patch_energy += cz.z.mesh().area(c) * W.finite_part(cz.z.gradient(c)).value();
      double target = 0.0;
      for (const auto& [c, a] : core_ov.cells) target += a * (base.wqc[c] + eta);

      const bool det_ok = incompressible ? (min_det > 0.0 && max_violation <= kIncompressibleTol)
                                         : (min_det > 0.0);
      if (!det_ok || !(patch_energy <= target + 1e-12)) {
        ++log.skipped;
        cover.remove_disk(ball.center, rho);
        continue;
      }

      // Accept: swap in the patch and retire the core.
      for (const auto& [c, a] : core_ov.cells) base.remaining[c] = std::max(0.0, base.remaining[c] - a);
      patch_energy_total += patch_energy;
      for (int c = 0; c < cz.z.mesh().num_cells(); ++c) {
        const Vector2d b = cz.z.mesh().barycenter(c);
        const Vector2d zb = (cz.z.value(cz.z.mesh().cell(c)[0]) + cz.z.value(cz.z.mesh().cell(c)[1]) +
                             cz.z.value(cz.z.mesh().cell(c)[2])) / 3.0;
        const auto hb = locator.locate(b, 1e-6);
        if (hb.cell >= 0)
          drift_sq += cz.z.mesh().area(c) * (zb - u.interpolate(hb.cell, hb.barycentric)).squaredNorm();
      }
      cover.remove_disk(a0, rho);
      log.max_null_defect_rel = std::max(log.max_null_defect_rel, null_defect);
      log.min_patch_det = std::min(log.min_patch_det, min_det);
      log.max_det_violation = std::max(log.max_det_violation, max_violation);
      ++log.balls;
      RecoveryPatchRecord rec;
      rec.center = a0;
      rec.rho = rho;
      rec.energy = patch_energy;
      if (opts.keep_patches) rec.field = cz.z;
      result.patches.push_back(std::move(rec));
    }

    log.energy = current_energy();
    log.volume_remaining = cover.remaining_measure();
    log.l2_drift = std::sqrt(drift_sq);
    result.trajectory.push_back(log);

    const bool at_bound =
        opts.stop_at_bound &&
        log.energy <= result.relaxed_reference + 2.0 * eta * result.domain_measure;
    if (cover.remaining_measure() <= opts.stop_remaining_fraction * result.domain_measure ||
        at_bound || (log.balls == 0 && log.skipped == 0 && vr.balls.empty()))
      break;
  }

  result.final_energy =
      result.trajectory.empty() ? result.initial_energy : result.trajectory.back().energy;
  result.ok = true;
  return result;
}

}  // namespace qcr
