#pragma once

#include <functional>
#include <string>
#include <utility>

#include "qcr/extended_real.hpp"

namespace qcr {

/// Convex determinant penalty theta : (0,inf) -> [0,inf), extended by +inf on
/// (-inf, 0].  Diverges as t -> 0+ so that it acts as a barrier against
/// degenerating volume.
class ThetaPenalty {
 public:
  ThetaPenalty(std::function<double(double)> eval_positive, std::string tag)
      : eval_(std::move(eval_positive)), tag_(std::move(tag)) {}

  ExtendedReal operator()(double t) const {
    if (t <= 0.0) return ExtendedReal::infinity();
    return ExtendedReal(eval_(t));
  }

  const std::string& tag() const { return tag_; }

 private:
  std::function<double(double)> eval_;
  std::string tag_;
};

/// Default penalty (t - 1/t)^2: convex on (0,inf), vanishes at t = 1,
/// diverges at 0+ and at infinity.
inline ThetaPenalty make_theta_default() {
  return ThetaPenalty(
      [](double t) {
        const double u = t - 1.0 / t;
        return u * u;
      },
      "(t-1/t)^2");
}

/// Identically zero penalty (degenerate, for structure-test counterexamples).
inline ThetaPenalty make_theta_zero() {
  return ThetaPenalty([](double) { return 0.0; }, "zero");
}

/// theta(t) = t (not convexity-compatible with the product structure bound on
/// large boxes; used as an intentional non-example).
inline ThetaPenalty make_theta_linear() {
  return ThetaPenalty([](double t) { return t; }, "t");
}

}  // namespace qcr
