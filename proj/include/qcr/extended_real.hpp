#pragma once

#include <cassert>
#include <cmath>
#include <limits>

namespace qcr {

/// Value in [0,inf] U R used for extended-valued energy densities.
///
/// The wrapper keeps +inf as a first-class citizen: addition absorbs,
/// comparisons are a total order (NaN is rejected on construction), and
/// scaling by a zero weight against an infinite value is rejected instead of
/// silently producing NaN.  Convex combinations drop zero-weight terms, which
/// is the one place where 0*inf has a well-defined meaning here.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : v_(v) { assert(!std::isnan(v)); }

  static constexpr ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  constexpr bool is_finite() const { return std::isfinite(v_); }
  constexpr bool is_infinite() const { return std::isinf(v_); }

  /// Raw value; +inf maps to the IEEE infinity.
  constexpr double value() const { return v_; }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    return ExtendedReal(a.v_ + b.v_);
  }
  ExtendedReal& operator+=(ExtendedReal o) {
    v_ += o.v_;
    return *this;
  }

  /// Scaling with a nonnegative weight.  t == 0 against an infinite value is
  /// rejected; use convex_combine where that case must be dropped.
  friend ExtendedReal operator*(double t, ExtendedReal a) {
    assert(t >= 0.0);
    assert(!(t == 0.0 && a.is_infinite()));
    return ExtendedReal(t == 0.0 ? 0.0 : t * a.v_);
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }
  friend constexpr bool operator<(ExtendedReal a, ExtendedReal b) { return a.v_ < b.v_; }
  friend constexpr bool operator>(ExtendedReal a, ExtendedReal b) { return a.v_ > b.v_; }
  friend constexpr bool operator<=(ExtendedReal a, ExtendedReal b) { return a.v_ <= b.v_; }
  friend constexpr bool operator>=(ExtendedReal a, ExtendedReal b) { return a.v_ >= b.v_; }

 private:
  double v_ = 0.0;
};

/// t*a + (1-t)*b for t in [0,1]; endpoints with zero weight are dropped so a
/// vanishing weight never multiplies an infinity.
inline ExtendedReal convex_combine(double t, ExtendedReal a, ExtendedReal b) {
  assert(t >= 0.0 && t <= 1.0);
  if (t == 0.0) return b;
  if (t == 1.0) return a;
  return ExtendedReal(t * a.value() + (1.0 - t) * b.value());
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace qcr
