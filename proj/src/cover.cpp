#include "qcr/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcr {

CoverState::CoverState(const Vector2d& lo, const Vector2d& hi, int nx, int ny)
    : lo_(lo), hi_(hi), nx_(nx), ny_(ny) {
  h_ = (hi.x() - lo.x()) / nx;
  const double hy = (hi.y() - lo.y()) / ny;
  if (std::abs(h_ - hy) > 1e-12 * h_)
    throw std::invalid_argument("CoverState: cells must be square");
  mask_.assign(static_cast<size_t>(nx_) * ny_, 1);
  remaining_cells_ = static_cast<long long>(nx_) * ny_;
}

void CoverState::remove_disk(const Vector2d& center, double radius) {
  const int i0 = std::max(0, int((center.x() - radius - lo_.x()) / h_) - 1);
  const int i1 = std::min(nx_ - 1, int((center.x() + radius - lo_.x()) / h_) + 1);
  const int j0 = std::max(0, int((center.y() - radius - lo_.y()) / h_) - 1);
  const int j1 = std::min(ny_ - 1, int((center.y() + radius - lo_.y()) / h_) + 1);
  const double r2 = radius * radius;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      if (!mask_[idx(i, j)]) continue;
      if ((cell_center(i, j) - center).squaredNorm() <= r2) {
        mask_[idx(i, j)] = 0;
        --remaining_cells_;
      }
    }
  }
}

namespace {

// Felzenszwalb-Huttenlocher 1D squared distance transform.  Sites with
// infinite f are skipped; callers guarantee f[0] is finite (border site).
void dt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
           std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = double(q - v[k]) * (q - v[k]) + f[v[k]];
  }
}

}  // namespace

std::vector<double> CoverState::distance_to_complement() const {
  const size_t n = mask_.size();
  // Squared distances in cell units; complement cells are sites at 0, the
  // domain border acts as a site one cell beyond the grid.
  std::vector<double> g(n);
  for (int j = 0; j < ny_; ++j) {
    // 1D pass along x including virtual border sites.
    std::vector<double> f(nx_ + 2, 0.0);
    for (int i = 0; i < nx_; ++i) f[i + 1] = mask_[idx(i, j)] ? kInf : 0.0;
    std::vector<double> d(nx_ + 2);
    std::vector<int> v(nx_ + 2);
    std::vector<double> z(nx_ + 3);
    dt_1d(f, d, v, z);
    for (int i = 0; i < nx_; ++i) g[idx(i, j)] = d[i + 1];
  }
  std::vector<double> out(n);
  for (int i = 0; i < nx_; ++i) {
    std::vector<double> f(ny_ + 2, 0.0);
    for (int j = 0; j < ny_; ++j) f[j + 1] = g[idx(i, j)];
    std::vector<double> d(ny_ + 2);
    std::vector<int> v(ny_ + 2);
    std::vector<double> z(ny_ + 3);
    dt_1d(f, d, v, z);
    for (int j = 0; j < ny_; ++j) out[idx(i, j)] = h_ * std::sqrt(d[j + 1]);
  }
  return out;
}

VitaliRoundResult vitali_round(CoverState& state,
                               const std::function<double(const Vector2d&)>& radius_cap,
                               CoverMode mode, const VitaliRoundOptions& opts) {
  VitaliRoundResult res;
  res.measure_before = state.remaining_measure();
  if (state.empty()) {
    res.measure_after = 0.0;
    res.reached_target = true;
    state.advance_round();
    return res;
  }

  const double h = state.cell_size();
  const double r_min = opts.min_radius_cells * h;
  const std::vector<double> dist = state.distance_to_complement();

  struct Candidate {
    double radius;
    int i, j;
  };
  std::vector<Candidate> cands;
  cands.reserve(1 << 16);
  const double clearance = h * std::sqrt(0.5);  // cell center vs. cell square
  for (int j = 0; j < state.ny(); ++j) {
    for (int i = 0; i < state.nx(); ++i) {
      if (!state.cell_remaining(i, j)) continue;
      const Vector2d c = state.cell_center(i, j);
      const double r = std::min(radius_cap(c), dist[static_cast<size_t>(j) * state.nx() + i] - clearance);
      if (r >= r_min) cands.push_back({r, i, j});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.radius != b.radius) return a.radius > b.radius;
    if (a.j != b.j) return a.j < b.j;
    return a.i < b.i;
  });

  // Spatial hash over selected balls for the disjointness test.
  const double bucket = std::max(2.0 * (cands.empty() ? r_min : cands.front().radius), 4 * h);
  auto key = [&](const Vector2d& p) {
    return std::pair<long long, long long>(std::llround(std::floor(p.x() / bucket)),
                                           std::llround(std::floor(p.y() / bucket)));
  };
  std::vector<std::pair<std::pair<long long, long long>, int>> hash;
  auto disjoint = [&](const Vector2d& c, double r) {
    const auto k0 = key(c);
    for (const auto& [k, bi] : hash) {
      if (std::abs(k.first - k0.first) > 1 || std::abs(k.second - k0.second) > 1) continue;
      const auto& b = res.balls[bi];
      if ((b.center - c).norm() < b.radius + r) return false;
    }
    return true;
  };

  const double target = opts.target_fraction * res.measure_before;
  for (const auto& cand : cands) {
    if (res.covered_measure >= target || static_cast<int>(res.balls.size()) >= opts.max_balls)
      break;
    const Vector2d c = state.cell_center(cand.i, cand.j);
    if (!disjoint(c, cand.radius)) continue;
    res.balls.push_back({c, cand.radius});
    hash.emplace_back(key(c), static_cast<int>(res.balls.size()) - 1);
    res.covered_measure += M_PI * cand.radius * cand.radius;
  }
  res.reached_target = res.covered_measure >= target;

  if (opts.remove) {
    for (const auto& b : res.balls) {
      const double core = mode == CoverMode::kOrientation ? b.radius / 2.0 : b.radius;
      state.remove_disk(b.center, core);
    }
  }
  res.measure_after = state.remaining_measure();
  res.removed_measure = res.measure_before - res.measure_after;
  res.slack = std::max(0.0, res.measure_after - (1.0 - std::pow(2.0, -3.0)) * res.measure_before);
  state.advance_round();
  return res;
}

}  // namespace qcr
