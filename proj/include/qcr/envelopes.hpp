#pragma once

#include <optional>
#include <utility>

#include "qcr/energy.hpp"
#include "qcr/extended_real.hpp"
#include "qcr/matrix_kernel.hpp"
#include "qcr/theta.hpp"

namespace qcr {

/// Parameters of the analytic two-well envelope.  The twin directions are
/// fixed to v = (e1+e2)/sqrt(2), w = (e1-e2)/sqrt(2); the envelope vanishes on
/// rank-one segments between the wells exactly with this choice.
struct TwoWellEnvelopeParams {
  double lambda;
  ThetaPenalty theta;
  Vector2d v;
  Vector2d w;

  static TwoWellEnvelopeParams standard(double lambda, ThetaPenalty theta) {
    TwoWellEnvelopeParams p{lambda, std::move(theta), Vector2d::Zero(), Vector2d::Zero()};
    const double s = 1.0 / std::sqrt(2.0);
    p.v << s, s;
    p.w << s, -s;
    return p;
  }
};

/// Result of the inner constrained minimization defining h.
struct InnerMinimizer {
  double xi = 0.0;   ///< minimizer, xi >= x
  double eta = 0.0;  ///< minimizer, eta >= y
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct InnerMinimizeOptions {
  int coarse_grid = 24;          ///< points per axis in the bracketing stage
  double objective_tol = 1e-10;  ///< stop when coordinate steps improve less than this
  int max_iterations = 4000;
};

/// A(x,y,d) = (x^2+y^2)|U1|^2/2 + (lambda^2 - 1/lambda^2) sqrt(x^2 y^2 - d^2) + 2d
/// with |U1|^2 = lambda^2 + 1/lambda^2.  Domain x^2 y^2 >= d^2; the radicand is
/// clamped at zero within 1e-12 of the boundary and rejected beyond.
double A_fn(double x, double y, double d, double lambda);

/// h(x,y,d) = min over xi in [x,inf), eta in [y,inf) of
///   xi^2 + eta^2 + |U1|^2 - 2 sqrt(A(xi,eta,d)).
/// The objective is coercive, so a finite search box derived from the
/// coercivity bound contains the minimizer; a coarse grid guards against
/// missing interior minima and coordinate descent with shrinking steps
/// refines to the objective tolerance.
std::pair<double, InnerMinimizer> h_fn(double x, double y, double d, double lambda,
                                       const InnerMinimizeOptions& opts = {});

/// Quasiconvex envelope of the two-well density:
///   W_qc(F) = h(|Fv|, |Fw|, det F) + theta(det F),  +inf when det F <= 0.
ExtendedReal two_well_qc(const Matrix2d& F, const TwoWellEnvelopeParams& params,
                         const InnerMinimizeOptions& opts = {});

/// Quasiconvex envelope of the 2D incompressible nematic density at p = 2,
/// gamma = (1/gamma2, gamma2) with gamma2 > 1:
///   +inf if det F != 1;  2 if lambda_2(F) <= gamma2;  W_nem(F) otherwise.
ExtendedReal nematic_qc_2d(const Matrix2d& F, double gamma2);

enum class EnvelopeRegime { kInadmissible, kRelaxed, kElastic };

/// Regime classification used by the CLI: inadmissible (constraint violated),
/// relaxed (envelope strictly below the density) or elastic (envelope equals
/// the density).
EnvelopeRegime nematic_qc_regime(const Matrix2d& F, double gamma2);
EnvelopeRegime two_well_qc_regime(const Matrix2d& F, const TwoWellEnvelopeParams& params,
                                  const EnergyDensity& density);

}  // namespace qcr
