#pragma once

#include <optional>
#include <vector>

#include "qcr/energy.hpp"
#include "qcr/matrix_kernel.hpp"
#include "qcr/mesh.hpp"

namespace qcr {

/// Rank-one decomposition describing an oscillating test function with affine
/// boundary data F = t A + (1-t) B, B - A = a (x) n_dir.
struct LaminateSpec {
  Matrix2d A;
  Matrix2d B;
  double t = 0.5;          ///< volume fraction of the A gradient
  Vector2d a = Vector2d::Zero();
  Vector2d n_dir = Vector2d::UnitX();  ///< unit stripe normal
  int stripes = 32;        ///< oscillation depth k (stripes across the ball diameter)
  double layer_fraction = 0.0;  ///< of ball volume; 0 -> 2/stripes

  Matrix2d mean() const { return t * A + (1.0 - t) * B; }
  double effective_layer_fraction() const {
    return layer_fraction > 0.0 ? layer_fraction : 2.0 / stripes;
  }

  /// Builds the spec from a rank-one pair; throws if B - A is not rank one
  /// within 1e-10 relative.
  static LaminateSpec from_pair(const Matrix2d& A, const Matrix2d& B, double t, int stripes);
};

struct LaminateBuildOptions {
  Vector2d center = Vector2d::Zero();
  int ngon = 0;        ///< polygon sides approximating the ball; 0 -> auto
  int transverse = 0;  ///< grid lines across the stripes; 0 -> auto
};

/// Piecewise-affine laminate on a polygonal ball: phi(x) = F x on the
/// boundary, gradient in {A, B} outside a boundary layer of the prescribed
/// volume fraction.  The layer interpolates affinely to the boundary data, so
/// the energy excess it carries is O(1/stripes).
struct LaminatePatch {
  MeshField field;
  std::vector<char> layer_cell;  ///< per cell: 1 in the boundary layer
  double layer_area = 0.0;
  double min_det = 0.0;     ///< min per-cell det of the built field
  Matrix2d boundary_gradient = Matrix2d::Zero();
  double radius = 0.0;
};

LaminatePatch build_laminate(const LaminateSpec& spec, double radius,
                             const LaminateBuildOptions& opts = {});

/// Laminate whose mean gradient matches F on a twinning segment of the
/// two-well model (F = U2 + t a(x)n for one of the twinning solutions).
/// Returns nullopt when F is not on a segment within `tol`.
std::optional<LaminateSpec> twin_laminate_for(const TwoWellModel& model, const Matrix2d& F,
                                              int stripes, double tol = 1e-8);

/// Simple shear laminate for the 2D incompressible nematic model: splits F
/// (det F = 1, lambda_2(F) < gamma2) along a volume-preserving rank-one line
/// into two gradients with lambda_2 = gamma2.  Returns nullopt when F is
/// already outside the relaxed regime.
std::optional<LaminateSpec> nematic_laminate_for(double gamma2, const Matrix2d& F, int stripes);

/// Seeded family of twinning laminates (random fraction, branch and global
/// rotation) for quasiconvexity tests.
std::vector<LaminateSpec> make_random_twin_laminates(const TwoWellModel& model, int count,
                                                     unsigned seed, int stripes = 16);

}  // namespace qcr
