#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcr/energy.hpp"
#include "qcr/mesh.hpp"
#include "qcr/translation.hpp"

namespace qcr {

enum class RecoveryMode { kOrientation, kIncompressible, kSubmultiplicative };

struct RecoveryOptions {
  int max_rounds = 40;
  double radius_cap = 0.0;  ///< max ball radius; 0 -> eta
  int raster = 512;         ///< covering raster resolution per axis
  int stripes = 32;         ///< laminate oscillation depth
  double delta_factor = 0.1;  ///< qualification threshold delta = eta * delta_factor
  int ngon = 64;              ///< polygon sides for discrete balls
  int max_balls_per_round = 4096;
  bool keep_patches = false;  ///< retain patch fields (for export)
  double stop_remaining_fraction = 1e-3;
  bool stop_at_bound = true;  ///< stop once the energy meets ref + 2 eta |Omega|
  TranslationOptions translation;
};

struct RecoveryRoundLog {
  int round = 0;
  double energy = 0.0;
  double relaxed_reference = 0.0;
  double volume_remaining = 0.0;
  double l2_drift = 0.0;
  int balls = 0;
  int skipped = 0;
  double max_null_defect_rel = 0.0;    ///< per-patch |int det Dz - int det Du| / |B'|
  double min_patch_det = kInf;         ///< over modified cells this round
  double max_det_violation = 0.0;      ///< incompressible: max |det-1| outside layers
};

struct RecoveryPatchRecord {
  Vector2d center = Vector2d::Zero();
  double rho = 0.0;
  double energy = 0.0;
  std::optional<MeshField> field;
};

struct RecoveryResult {
  std::vector<RecoveryRoundLog> trajectory;
  std::vector<RecoveryPatchRecord> patches;
  double final_energy = 0.0;
  double relaxed_reference = 0.0;
  double domain_measure = 0.0;
  double initial_energy = 0.0;
  bool ok = false;
  std::string note;
};

/// Iterative recovery construction: rounds of disjoint balls covering the
/// untouched region; in each ball the local construction (laminate test
/// function, translation selection in the orientation modes, composition
/// z = u o v) replaces u where the per-ball energy certificate
///   int_{B'} W(Dz) <= int_{B'} (Wqc(Du) + eta)
/// holds; the modified cores are removed from the region and the trajectory
/// of the total energy is reported against int Wqc(Du).  Balls failing the
/// Lebesgue-point qualification or the certificate are skipped (the field
/// keeps u there) and reported.
///
/// Orientation-preserving and submultiplicative modes require det Du > 0 per
/// cell; the incompressible mode requires |det Du - 1| <= 1e-9 per cell.
/// Produced fields preserve the constraint per cell (exact assertion;
/// incompressible boundary layers keep det > 0 and are excluded from the
/// membership check).
RecoveryResult recovery_sequence(const MeshField& u, const EnergyDensity& W,
                                 const std::function<ExtendedReal(const Matrix2d&)>& Wqc,
                                 double eta, RecoveryMode mode,
                                 const RecoveryOptions& opts = {});

}  // namespace qcr
