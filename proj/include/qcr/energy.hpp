#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qcr/extended_real.hpp"
#include "qcr/matrix_kernel.hpp"
#include "qcr/theta.hpp"

namespace qcr {

enum class ConstraintMode { kOrientationPreserving, kIncompressible, kUnconstrained };

/// Membership tolerance for the volume-preserving set {det F = 1} when
/// evaluating sampled (floating point) matrices.  Piecewise-affine
/// constructions built from rank-one updates keep det = 1 exactly; everything
/// else needs a tolerance since the set has measure zero.
inline constexpr double kIncompressibleTol = 1e-9;

struct TwoWellModel {
  double lambda;
  ThetaPenalty theta;
  Matrix2d U1, U2;

  double well_distance_sq(const Matrix2d& F) const {
    return std::min(dist_sq_to_well(F, U1), dist_sq_to_well(F, U2));
  }
};

struct OneWellModel {
  ThetaPenalty theta;
};

struct NematicModel {
  int n = 2;
  Eigen::VectorXd gamma;
  double p = 2.0;

  double stretch_energy(const Matrix2d& F) const {
    const Vector2d sv = singular_values(F);
    double s = 0.0;
    for (int i = 0; i < 2; ++i) s += std::pow(sv(i) / gamma(i), p);
    return s;
  }
  double stretch_energy(const Matrix3d& F) const {
    const Vector3d sv = singular_values(F);
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += std::pow(sv(i) / gamma(i), p);
    return s;
  }
};

struct CustomModel {
  std::function<ExtendedReal(const Matrix2d&)> eval;
  std::string tag;
};

/// Extended-valued energy density F -> [0, inf].  +inf exactly where the
/// constraint mode excludes F (det F <= 0, resp. det F != 1).
class EnergyDensity {
 public:
  using Model = std::variant<TwoWellModel, OneWellModel, NematicModel, CustomModel>;

  EnergyDensity(Model model, ConstraintMode mode, int n, double p)
      : model_(std::move(model)), mode_(mode), n_(n), p_(p) {}

  ConstraintMode mode() const { return mode_; }
  int dimension() const { return n_; }
  double growth_exponent() const { return p_; }

  bool admissible(double det) const {
    switch (mode_) {
      case ConstraintMode::kOrientationPreserving:
        return det > 0.0;
      case ConstraintMode::kIncompressible:
        return std::abs(det - 1.0) <= kIncompressibleTol;
      case ConstraintMode::kUnconstrained:
        return true;
    }
    return false;
  }

  ExtendedReal operator()(const Matrix2d& F) const {
    if (const auto* c = std::get_if<CustomModel>(&model_)) return c->eval(F);
    if (!admissible(determinant(F))) return ExtendedReal::infinity();
    return finite_part(F);
  }

  /// The formula branch of the density, without the constraint indicator.
  /// For orientation-preserving models theta still diverges as det -> 0+.
  ExtendedReal finite_part(const Matrix2d& F) const {
    if (const auto* tw = std::get_if<TwoWellModel>(&model_))
      return ExtendedReal(tw->well_distance_sq(F)) + tw->theta(determinant(F));
    if (const auto* ow = std::get_if<OneWellModel>(&model_))
      return ExtendedReal(dist_sq_to_well(F, Matrix2d::Identity().eval())) +
             ow->theta(determinant(F));
    if (const auto* nm = std::get_if<NematicModel>(&model_))
      return ExtendedReal(nm->stretch_energy(F));
    return std::get<CustomModel>(model_).eval(F);
  }

  ExtendedReal operator()(const Matrix3d& F) const {
    const auto* nm = std::get_if<NematicModel>(&model_);
    if (nm == nullptr || nm->n != 3)
      throw std::invalid_argument("EnergyDensity: 3x3 evaluation only for 3D nematic models");
    if (!admissible(determinant(F))) return ExtendedReal::infinity();
    return ExtendedReal(nm->stretch_energy(F));
  }

  const TwoWellModel* two_well() const { return std::get_if<TwoWellModel>(&model_); }
  const OneWellModel* one_well() const { return std::get_if<OneWellModel>(&model_); }
  const NematicModel* nematic() const { return std::get_if<NematicModel>(&model_); }
  const ThetaPenalty* theta() const {
    if (const auto* tw = std::get_if<TwoWellModel>(&model_)) return &tw->theta;
    if (const auto* ow = std::get_if<OneWellModel>(&model_)) return &ow->theta;
    return nullptr;
  }

 private:
  Model model_;
  ConstraintMode mode_;
  int n_;
  double p_;
};

/// Two-well density dist^2(F, SO(2)U1 u SO(2)U2) + theta(det F) with
/// U1 = diag(lambda, 1/lambda), U2 = diag(1/lambda, lambda).  Requires
/// lambda > 1 (use make_one_well for the degenerate single well).
inline EnergyDensity make_two_well(double lambda, ThetaPenalty theta) {
  if (!(lambda > 1.0))
    throw std::invalid_argument("make_two_well: requires lambda > 1");
  TwoWellModel m{lambda, std::move(theta), Matrix2d::Zero(), Matrix2d::Zero()};
  m.U1 << lambda, 0, 0, 1.0 / lambda;
  m.U2 << 1.0 / lambda, 0, 0, lambda;
  return EnergyDensity(std::move(m), ConstraintMode::kOrientationPreserving, 2, 2.0);
}

/// Single-well density dist^2(F, SO(2)) + theta(det F).
inline EnergyDensity make_one_well(ThetaPenalty theta) {
  return EnergyDensity(OneWellModel{std::move(theta)}, ConstraintMode::kOrientationPreserving, 2,
                       2.0);
}

/// Incompressible nematic density sum_i (lambda_i(F)/gamma_i)^p on {det = 1},
/// +inf elsewhere.  Requires gamma_i > 0 with product 1; the minimum value n
/// is attained where lambda_i(F) = gamma_i.
inline EnergyDensity make_nematic(int n, const Eigen::VectorXd& gamma, double p) {
  if (n != 2 && n != 3) throw std::invalid_argument("make_nematic: n must be 2 or 3");
  if (gamma.size() != n) throw std::invalid_argument("make_nematic: gamma must have n entries");
  double prod = 1.0;
  for (int i = 0; i < n; ++i) {
    if (!(gamma(i) > 0.0)) throw std::invalid_argument("make_nematic: gamma_i must be positive");
    prod *= gamma(i);
  }
  if (std::abs(prod - 1.0) > 1e-12)
    throw std::invalid_argument("make_nematic: product of gamma_i must equal 1");
  if (!(p >= 1.0)) throw std::invalid_argument("make_nematic: requires p >= 1");
  return EnergyDensity(NematicModel{n, gamma, p}, ConstraintMode::kIncompressible, n, p);
}

inline EnergyDensity make_custom(std::function<ExtendedReal(const Matrix2d&)> eval,
                                 ConstraintMode mode, double p, std::string tag) {
  return EnergyDensity(CustomModel{std::move(eval), std::move(tag)}, mode, 2, p);
}

// ---------------------------------------------------------------------------
// Structural hypothesis checks (deterministic sample sweeps).

/// Sample box for growth certification: a lattice over matrix entries
/// restricted to a determinant range (orientation-preserving models), or a
/// chart sweep of the det = 1 slice (incompressible models).
struct GrowthSampleBox {
  double entry_bound = 4.0;   ///< entries range over [-entry_bound, entry_bound]
  double det_min = 0.2;
  double det_max = 5.0;
  int points_per_dim = 50;
  double stretch_max = 4.0;   ///< incompressible chart: largest singular value
};

struct GrowthCertificate {
  double c = 0.0;
  double p = 0.0;
  std::string sample_set;
  double max_violation = 0.0;  ///< certificate valid iff <= 0
  Matrix2d worst_sample = Matrix2d::Zero();
  std::string violated_inequality;  ///< "lower", "upper" or empty

  bool valid() const { return max_violation <= 0.0; }
};

/// Checks (1/c)|F|^p + (1/c) theta(det F) - c <= W(F) <= c|F|^p + c theta(det F) + c
/// (orientation-preserving; the theta terms are dropped when the model carries
/// no penalty) over a deterministic sample set excluding the +inf region.
GrowthCertificate certify_growth(const EnergyDensity& W, const GrowthSampleBox& box, double c);

/// Empirical structure constant sup theta(xy) / ((1+theta(x))(1+theta(y)))
/// over a log-spaced grid on (0, T]^2.
double check_theta_structure(const ThetaPenalty& theta, double T, int points_per_dim = 200);

/// Empirical submultiplicativity constant sup W(FG)/((1+W(F))(1+W(G))) over
/// the given sample pairs (which must lie in the finite region of W).
double check_submultiplicative(const EnergyDensity& W,
                               const std::vector<std::pair<Matrix2d, Matrix2d>>& samples);

/// Seeded sample pairs with both factors in {det in [det_min, det_max],
/// |F| <= norm_bound}.
std::vector<std::pair<Matrix2d, Matrix2d>> make_submultiplicative_samples(
    int count, double det_min, double det_max, double norm_bound, unsigned seed);

}  // namespace qcr
