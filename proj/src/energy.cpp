#include "qcr/energy.hpp"

#include <random>

namespace qcr {

namespace {

double growth_reference(const EnergyDensity& W, const Matrix2d& F) {
  const double p = W.growth_exponent();
  double ref = std::pow(F.norm(), p);
  if (const ThetaPenalty* theta = W.theta()) {
    const ExtendedReal th = (*theta)(determinant(F));
    ref += th.value();
  }
  return ref;
}

void record_violation(GrowthCertificate& cert, const Matrix2d& F, double violation,
                      const char* side) {
  if (violation > cert.max_violation) {
    cert.max_violation = violation;
    cert.worst_sample = F;
    cert.violated_inequality = side;
  }
}

void check_sample(const EnergyDensity& W, double c, const Matrix2d& F, GrowthCertificate& cert) {
  const ExtendedReal w = W(F);
  if (!w.is_finite()) return;  // box is supposed to exclude the +inf region
  const double ref = growth_reference(W, F);
  record_violation(cert, F, (ref / c - c) - w.value(), "lower");
  record_violation(cert, F, w.value() - (c * ref + c), "upper");
}

}  // namespace

GrowthCertificate certify_growth(const EnergyDensity& W, const GrowthSampleBox& box, double c) {
  GrowthCertificate cert;
  cert.c = c;
  cert.p = W.growth_exponent();
  cert.max_violation = -kInf;

  if (W.mode() == ConstraintMode::kIncompressible) {
    // Sweep the det = 1 slice on the chart (stretch, two rotation angles).
    const int n = box.points_per_dim;
    cert.sample_set = "det=1 chart, " + std::to_string(n) + "^3 lattice, stretch <= " +
                      std::to_string(box.stretch_max);
    for (int i = 0; i < n; ++i) {
      const double lam = 1.0 + (box.stretch_max - 1.0) * i / (n - 1);
      Matrix2d S = Matrix2d::Zero();
      S(0, 0) = 1.0 / lam;
      S(1, 1) = lam;
      for (int j = 0; j < n; ++j) {
        const Matrix2d R1 = rotation2(M_PI * j / n);
        for (int k = 0; k < n; ++k) {
          const Matrix2d R2 = rotation2(M_PI * k / n);
          const Matrix2d F = R1 * S * R2;
          if (F.norm() > box.entry_bound) continue;
          check_sample(W, c, F, cert);
        }
      }
    }
    return cert;
  }

  const int n = box.points_per_dim;
  cert.sample_set = std::to_string(n) + "^4 entry lattice, |entry| <= " +
                    std::to_string(box.entry_bound) + ", det in [" + std::to_string(box.det_min) +
                    ", " + std::to_string(box.det_max) + "]";
  const double lo = -box.entry_bound;
  const double step = 2.0 * box.entry_bound / (n - 1);
  Matrix2d F;
  for (int i0 = 0; i0 < n; ++i0) {
    F(0, 0) = lo + step * i0;
    for (int i1 = 0; i1 < n; ++i1) {
      F(0, 1) = lo + step * i1;
      for (int i2 = 0; i2 < n; ++i2) {
        F(1, 0) = lo + step * i2;
        for (int i3 = 0; i3 < n; ++i3) {
          F(1, 1) = lo + step * i3;
          const double d = determinant(F);
          if (d < box.det_min || d > box.det_max) continue;
          check_sample(W, c, F, cert);
        }
      }
    }
  }
  return cert;
}

double check_theta_structure(const ThetaPenalty& theta, double T, int points_per_dim) {
  // Log-spaced grid on (0, T]^2; the ratio is symmetric in (x, y).
  const double lo = 1e-6;
  double sup = 0.0;
  for (int i = 0; i < points_per_dim; ++i) {
    const double x = lo * std::pow(T / lo, double(i) / (points_per_dim - 1));
    const double tx = theta(x).value();
    for (int j = i; j < points_per_dim; ++j) {
      const double y = lo * std::pow(T / lo, double(j) / (points_per_dim - 1));
      const double num = theta(x * y).value();
      const double ratio = num / ((1.0 + tx) * (1.0 + theta(y).value()));
      sup = std::max(sup, ratio);
    }
  }
  return sup;
}

double check_submultiplicative(const EnergyDensity& W,
                               const std::vector<std::pair<Matrix2d, Matrix2d>>& samples) {
  double sup = 0.0;
  for (const auto& [F, G] : samples) {
    const ExtendedReal wf = W(F), wg = W(G), wfg = W(F * G);
    if (!wf.is_finite() || !wg.is_finite())
      throw std::invalid_argument("check_submultiplicative: sample outside the finite region");
    const double ratio = wfg.value() / ((1.0 + wf.value()) * (1.0 + wg.value()));
    sup = std::max(sup, ratio);
  }
  return sup;
}

std::vector<std::pair<Matrix2d, Matrix2d>> make_submultiplicative_samples(
    int count, double det_min, double det_max, double norm_bound, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(-norm_bound / 2.0, norm_bound / 2.0);
  auto draw = [&]() {
    Matrix2d F;
    for (;;) {
      F << entry(rng), entry(rng), entry(rng), entry(rng);
      const double d = determinant(F);
      if (d >= det_min && d <= det_max && F.norm() <= norm_bound) return F;
    }
  };
  std::vector<std::pair<Matrix2d, Matrix2d>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.emplace_back(draw(), draw());
  return out;
}

}  // namespace qcr
