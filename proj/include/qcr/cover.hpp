#pragma once

#include <functional>
#include <vector>

#include "qcr/matrix_kernel.hpp"

namespace qcr {

/// Remaining region of a covering iteration, tracked as a raster cell mask
/// over a rectangular domain.
class CoverState {
 public:
  CoverState(const Vector2d& lo, const Vector2d& hi, int nx, int ny);

  double cell_size() const { return h_; }
  double domain_measure() const { return (hi_ - lo_).prod(); }
  double remaining_measure() const { return remaining_cells_ * h_ * h_; }
  int round_index() const { return round_; }
  void advance_round() { ++round_; }
  bool empty() const { return remaining_cells_ == 0; }

  Vector2d cell_center(int i, int j) const {
    return lo_ + Vector2d((i + 0.5) * h_, (j + 0.5) * h_);
  }
  bool cell_remaining(int i, int j) const { return mask_[idx(i, j)] != 0; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  /// Removes all cells whose center lies in the closed disk.
  void remove_disk(const Vector2d& center, double radius);

  /// Distance (world units) from each remaining cell center to the complement
  /// of the remaining region; removed cells carry 0.  The domain boundary
  /// counts as complement.
  std::vector<double> distance_to_complement() const;

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx_ + i; }

  Vector2d lo_, hi_;
  int nx_, ny_;
  double h_;
  std::vector<uint8_t> mask_;
  long long remaining_cells_ = 0;
  int round_ = 0;
};

enum class CoverMode { kOrientation, kIncompressible };

struct VitaliBall {
  Vector2d center;
  double radius;
};

struct VitaliRoundOptions {
  double target_fraction = 0.5;  ///< stop once this fraction of the region is covered
  int min_radius_cells = 2;      ///< balls below this resolution are not placed
  int max_balls = 1 << 20;
  bool remove = true;  ///< remove the cores here (false: caller removes after construction)
};

struct VitaliRoundResult {
  std::vector<VitaliBall> balls;
  double measure_before = 0.0;
  double covered_measure = 0.0;  ///< sum of ball areas (analytic)
  double removed_measure = 0.0;
  double measure_after = 0.0;
  bool reached_target = false;
  double slack = 0.0;  ///< max(0, after - (1 - 2^{-n-1}) * before), n = 2
};

/// One round of the covering iteration: greedily selects disjoint balls inside
/// the remaining region (radius capped by the supplied field, shrunk to fit
/// the region), covering at least the target fraction of the remaining
/// measure when the resolution permits, then removes the half-radius closed
/// balls (orientation mode) or the full balls (incompressible mode).
VitaliRoundResult vitali_round(CoverState& state,
                               const std::function<double(const Vector2d&)>& radius_cap,
                               CoverMode mode, const VitaliRoundOptions& opts = {});

}  // namespace qcr
