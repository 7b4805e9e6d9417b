#include "qcr/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcr {

namespace {

constexpr double kRadicandTol = 1e-12;

struct HObjective {
  double d;
  double k;  // |U1|^2 = lambda^2 + 1/lambda^2
  double m;  // lambda^2 - 1/lambda^2

  // A with the radicand clamped; returns nan outside the domain.
  double A(double x, double y) const {
    const double q = x * x * y * y - d * d;
    const double scale = std::max(1.0, x * x * y * y + d * d);
    if (q < -kRadicandTol * scale) return std::numeric_limits<double>::quiet_NaN();
    return (x * x + y * y) * k / 2.0 + m * std::sqrt(std::max(q, 0.0)) + 2.0 * d;
  }

  double operator()(double xi, double eta) const {
    const double a = A(xi, eta);
    if (std::isnan(a)) return kInf;
    return xi * xi + eta * eta + k - 2.0 * std::sqrt(std::max(a, 0.0));
  }
};

}  // namespace

double A_fn(double x, double y, double d, double lambda) {
  if (!(x >= 0.0 && y >= 0.0)) throw std::invalid_argument("A_fn: requires x, y >= 0");
  const double k = lambda * lambda + 1.0 / (lambda * lambda);
  const double m = lambda * lambda - 1.0 / (lambda * lambda);
  const HObjective obj{d, k, m};
  const double a = obj.A(x, y);
  if (std::isnan(a)) throw std::domain_error("A_fn: x^2 y^2 < d^2 beyond tolerance");
  return a;
}

std::pair<double, InnerMinimizer> h_fn(double x, double y, double d, double lambda,
                                       const InnerMinimizeOptions& opts) {
  if (!(x >= 0.0 && y >= 0.0)) throw std::invalid_argument("h_fn: requires x, y >= 0");
  if (!(lambda >= 1.0)) throw std::invalid_argument("h_fn: requires lambda >= 1");
  const double k = lambda * lambda + 1.0 / (lambda * lambda);
  const double m = lambda * lambda - 1.0 / (lambda * lambda);
  const HObjective obj{d, k, m};
  const double ad = std::abs(d);

  // Feasible anchor closest to the corner (x, y).
  double ax = x, ay = y;
  if (ax * ay < ad) {
    double best = kInf;
    auto consider = [&](double cx, double cy) {
      if (cx >= x && cy >= y) {
        const double v = obj(cx, cy);
        if (v < best) {
          best = v;
          ax = cx;
          ay = cy;
        }
      }
    };
    if (x > 0.0) consider(x, ad / x);
    if (y > 0.0) consider(ad / y, y);
    consider(std::sqrt(ad), std::sqrt(ad));
    if (!(best < kInf)) {
      ax = std::max(x, std::sqrt(ad));
      ay = std::max(y, std::sqrt(ad));
    }
  }

  // Search radius from coercivity: the objective grows like rho^2 - 2 lambda rho,
  // so any point beating the anchor lies inside a ball fixed by the anchor value.
  double R = std::max({ax, ay, std::sqrt(ad), lambda + 1.0});
  for (int it = 0; it < 4; ++it) {
    const double a = obj.A(R, R);
    const double rhs = x * x + y * y + k + 2.0 * std::sqrt(std::max(a, 0.0));
    R = std::max(R, std::sqrt(rhs));
  }
  R *= 2.0;

  // Coarse bracketing grid on [x, R] x [y, R].
  double fbest = obj(ax, ay);
  double bx = ax, by = ay;
  const int n = std::max(opts.coarse_grid, 4);
  const double sx = (R - x) / (n - 1), sy = (R - y) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double xi = x + sx * i;
    for (int j = 0; j < n; ++j) {
      const double eta = y + sy * j;
      const double v = obj(xi, eta);
      if (v < fbest) {
        fbest = v;
        bx = xi;
        by = eta;
      }
    }
  }

  // Coordinate descent with shrinking steps.
  InnerMinimizer info;
  double step = std::max(sx, sy);
  int iters = 0;
  while (iters < opts.max_iterations && step > 1e-14 * std::max(1.0, R)) {
    bool improved = false;
    const double candidates[4][2] = {{bx + step, by}, {bx - step, by}, {bx, by + step}, {bx, by - step}};
    for (const auto& c : candidates) {
      const double cx = std::max(c[0], x);
      const double cy = std::max(c[1], y);
      const double v = obj(cx, cy);
      ++iters;
      if (v < fbest - 0.0) {
        if (fbest - v < opts.objective_tol && step < 1e-6 * std::max(1.0, R)) {
          fbest = v;
          bx = cx;
          by = cy;
          improved = false;
          break;
        }
        fbest = v;
        bx = cx;
        by = cy;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }

  info.xi = bx;
  info.eta = by;
  info.value = fbest;
  info.iterations = iters;
  info.converged = iters < opts.max_iterations;
  return {fbest, info};
}

ExtendedReal two_well_qc(const Matrix2d& F, const TwoWellEnvelopeParams& params,
                         const InnerMinimizeOptions& opts) {
  const double det = determinant(F);
  if (det <= 0.0) return ExtendedReal::infinity();
  const double x = (F * params.v).norm();
  const double y = (F * params.w).norm();
  auto [h, info] = h_fn(x, y, det, params.lambda, opts);
  if (!info.converged) throw std::runtime_error("two_well_qc: inner minimization stalled");
  return ExtendedReal(std::max(h, 0.0)) + params.theta(det);
}

ExtendedReal nematic_qc_2d(const Matrix2d& F, double gamma2) {
  if (!(gamma2 > 1.0)) throw std::invalid_argument("nematic_qc_2d: requires gamma2 > 1");
  const double det = determinant(F);
  if (std::abs(det - 1.0) > kIncompressibleTol) return ExtendedReal::infinity();
  const Vector2d sv = singular_values(F);
  if (sv(1) <= gamma2) return ExtendedReal(2.0);
  const double a = sv(0) * gamma2;  // lambda_1 / gamma_1 with gamma_1 = 1/gamma2
  const double b = sv(1) / gamma2;
  return ExtendedReal(a * a + b * b);
}

EnvelopeRegime nematic_qc_regime(const Matrix2d& F, double gamma2) {
  const double det = determinant(F);
  if (std::abs(det - 1.0) > kIncompressibleTol) return EnvelopeRegime::kInadmissible;
  return singular_values(F)(1) <= gamma2 ? EnvelopeRegime::kRelaxed : EnvelopeRegime::kElastic;
}

EnvelopeRegime two_well_qc_regime(const Matrix2d& F, const TwoWellEnvelopeParams& params,
                                  const EnergyDensity& density) {
  if (determinant(F) <= 0.0) return EnvelopeRegime::kInadmissible;
  const double qc = two_well_qc(F, params).value();
  const double w = density(F).value();
  return qc < w - 1e-9 ? EnvelopeRegime::kRelaxed : EnvelopeRegime::kElastic;
}

}  // namespace qcr
