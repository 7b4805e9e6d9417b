#include "qcr/laminate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "qcr/twinning.hpp"

namespace qcr {

LaminateSpec LaminateSpec::from_pair(const Matrix2d& A, const Matrix2d& B, double t,
                                     int stripes) {
  const Matrix2d R = B - A;
  const Vector2d sv = singular_values(R);
  if (sv(1) <= 0.0 || sv(0) > 1e-10 * sv(1))
    throw std::invalid_argument("LaminateSpec: B - A is not rank one");
  // Factor R = a n^T with |n| = 1 via the dominant right singular direction.
  const Matrix2d S = R.transpose() * R;
  Vector2d n(S(0, 1), sv(1) * sv(1) - S(0, 0));
  if (n.norm() < 1e-14 * sv(1) * sv(1)) n = Vector2d(1.0, 0.0);
  n.normalize();
  LaminateSpec spec;
  spec.A = A;
  spec.B = B;
  spec.t = t;
  spec.a = R * n;
  spec.n_dir = n;
  spec.stripes = stripes;
  return spec;
}

namespace {

// Sawtooth profile with slope -(1-t) on the A stripes and +t on the B
// stripes, shifted to be centered around zero (halves the oscillation
// amplitude, which keeps the composed map inside the ball).
struct Sawtooth {
  double period;
  double t;

  double operator()(double s) const {
    const double ss = s - period * std::floor(s / period);
    const double ta = t * period;
    const double raw = ss <= ta ? -(1.0 - t) * ss : -(1.0 - t) * ta + t * (ss - ta);
    return raw + t * (1.0 - t) * period / 2.0;
  }
  double slope(double s) const {
    const double ss = s - period * std::floor(s / period);
    return ss <= t * period ? -(1.0 - t) : t;
  }
};

// Gauge of a regular N-gon with circumradius rho centered at the origin:
// q = 1 exactly on the boundary.
struct PolygonGauge {
  double rho;
  int sides;

  double operator()(const Vector2d& x) const {
    const double r = x.norm();
    if (r == 0.0) return 0.0;
    const double sector = 2.0 * M_PI / sides;
    double psi = std::atan2(x.y(), x.x());
    double u = std::fmod(psi + sector / 2.0, sector);
    if (u < 0.0) u += sector;
    u -= sector / 2.0;
    return r * std::cos(u) / (rho * std::cos(sector / 2.0));
  }
};

}  // namespace

LaminatePatch build_laminate(const LaminateSpec& spec, double radius,
                             const LaminateBuildOptions& opts) {
  if (!(radius > 0.0)) throw std::invalid_argument("build_laminate: radius must be positive");
  const int k = std::max(spec.stripes, 1);
  const Matrix2d F = spec.mean();
  const Vector2d n = spec.n_dir.normalized();
  const Vector2d m(-n.y(), n.x());

  const bool degenerate = spec.t <= 0.0 || spec.t >= 1.0 || spec.a.norm() == 0.0;
  const int ngon = opts.ngon > 0 ? opts.ngon : std::clamp(4 * k, 32, 256);
  const int transverse = opts.transverse > 0 ? opts.transverse : std::clamp(k, 16, 96);
  if (ngon < 2 * k)
    throw std::invalid_argument("build_laminate: resolution too coarse for the requested stripes");

  const double period = 2.0 * radius / k;
  const Sawtooth saw{period, std::clamp(spec.t, 1e-12, 1.0 - 1e-12)};
  const PolygonGauge gauge{radius, ngon};
  const double layer_width = spec.effective_layer_fraction() * radius / 2.0;

  // Stripe-aligned coordinate lines: every stripe boundary gets a node line,
  // so no interior cell straddles two gradients.
  std::vector<double> s_lines;
  {
    const double s0 = -radius - period, s1 = radius + period;
    const int j0 = static_cast<int>(std::floor(s0 / period)) - 1;
    const int j1 = static_cast<int>(std::ceil(s1 / period)) + 1;
    for (int j = j0; j <= j1; ++j) {
      s_lines.push_back(j * period);
      if (!degenerate) s_lines.push_back((j + spec.t) * period);
    }
    std::sort(s_lines.begin(), s_lines.end());
  }
  std::vector<double> m_lines;
  for (int j = 0; j <= transverse; ++j)
    m_lines.push_back(-radius + 2.0 * radius * j / transverse);

  const std::vector<Vector2d> poly = regular_polygon(Vector2d::Zero(), radius, ngon);

  std::vector<Vector2d> verts;
  std::vector<std::array<int, 3>> tris;
  std::vector<char> layer_flag;
  std::map<std::pair<long long, long long>, int> index;
  const double quant = 1e-9 * radius;
  auto vertex_id = [&](const Vector2d& p) {
    const std::pair<long long, long long> key(std::llround(p.x() / quant),
                                              std::llround(p.y() / quant));
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(verts.size());
    verts.push_back(p);
    index.emplace(key, id);
    return id;
  };

  for (size_t i = 0; i + 1 < s_lines.size(); ++i) {
    for (size_t j = 0; j + 1 < m_lines.size(); ++j) {
      const double sa = s_lines[i], sb = s_lines[i + 1];
      const double ma = m_lines[j], mb = m_lines[j + 1];
      std::vector<Vector2d> rect{sa * n + ma * m, sb * n + ma * m, sb * n + mb * m,
                                 sa * n + mb * m};
      if ((rect[1] - rect[0]).x() * (rect[3] - rect[0]).y() -
              (rect[1] - rect[0]).y() * (rect[3] - rect[0]).x() < 0.0)
        std::reverse(rect.begin(), rect.end());
      std::vector<Vector2d> clipped = clip_polygon_convex(rect, poly);
      if (clipped.size() < 3) continue;
      // Fan triangulation of the convex piece.
      std::vector<int> ids;
      for (const auto& p : clipped) ids.push_back(vertex_id(p));
      bool in_layer = false;
      for (const auto& p : clipped) in_layer = in_layer || gauge(p) > 1.0 - layer_width / radius - 1e-12;
      for (size_t v = 1; v + 1 < ids.size(); ++v) {
        const Vector2d e1 = verts[ids[v]] - verts[ids[0]];
        const Vector2d e2 = verts[ids[v + 1]] - verts[ids[0]];
        const double twice_area = e1.x() * e2.y() - e1.y() * e2.x();
        if (twice_area <= 1e-14 * radius * radius) continue;
        tris.push_back({ids[0], ids[v], ids[v + 1]});
        layer_flag.push_back(in_layer ? 1 : 0);
      }
    }
  }

  auto mesh = std::make_shared<TriMesh>(std::move(verts), std::move(tris));
  std::vector<Vector2d> values;
  values.reserve(mesh->num_vertices());
  for (int v = 0; v < mesh->num_vertices(); ++v) {
    const Vector2d& x = mesh->vertex(v);
    double ramp = 0.0;
    if (!degenerate) {
      const double q = gauge(x);
      ramp = std::clamp((1.0 - q) * radius / layer_width, 0.0, 1.0);
      if (q >= 1.0 - 1e-12) ramp = 0.0;
    }
    values.push_back(F * x + (ramp * saw(x.dot(n))) * spec.a);
  }
  MeshField field(mesh, std::move(values));

  LaminatePatch patch{std::move(field), std::move(layer_flag), 0.0, kInf, F, radius};
  for (int c = 0; c < patch.field.mesh().num_cells(); ++c) {
    if (patch.layer_cell[c]) patch.layer_area += patch.field.mesh().area(c);
    patch.min_det = std::min(patch.min_det, determinant(patch.field.gradient(c)));
  }
  if (!opts.center.isZero()) {
    // Shift the patch to the requested ball center; values gain F * center so
    // the boundary data stays phi(x) = F x in world coordinates.
    std::vector<Vector2d> vs = patch.field.mesh().vertices();
    for (auto& p : vs) p += opts.center;
    auto shifted_mesh = std::make_shared<TriMesh>(
        std::move(vs), std::vector<std::array<int, 3>>(patch.field.mesh().cells()));
    std::vector<Vector2d> vals = patch.field.values();
    for (auto& w : vals) w += F * opts.center;
    patch.field = MeshField(std::move(shifted_mesh), std::move(vals));
  }
  return patch;
}

std::optional<LaminateSpec> twin_laminate_for(const TwoWellModel& model, const Matrix2d& F,
                                              int stripes, double tol) {
  const auto solutions = solve_twinning(model.U1, model.U2);
  const double scale = std::max(1.0, F.norm());
  for (const auto& sol : solutions) {
    const Matrix2d R = sol.rank_one();
    const double t = (F - model.U2).cwiseProduct(R).sum() / R.squaredNorm();
    if (t < -tol || t > 1.0 + tol) continue;
    const double tc = std::clamp(t, 0.0, 1.0);
    if ((F - model.U2 - tc * R).norm() > tol * scale) continue;
    LaminateSpec spec;
    spec.A = sol.Q * model.U1;  // t = 1 endpoint
    spec.B = model.U2;          // t = 0 endpoint
    spec.t = tc;
    spec.a = -sol.a;
    spec.n_dir = sol.n;
    spec.stripes = stripes;
    return spec;
  }
  return std::nullopt;
}

std::optional<LaminateSpec> nematic_laminate_for(double gamma2, const Matrix2d& F, int stripes) {
  if (!(gamma2 > 1.0)) throw std::invalid_argument("nematic_laminate_for: requires gamma2 > 1");
  if (std::abs(determinant(F) - 1.0) > kIncompressibleTol) return std::nullopt;
  if (singular_values(F)(1) >= gamma2) return std::nullopt;

  // Volume-preserving rank-one line through F: F_s = F (Id + s m n^T) with
  // m _|_ n, i.e. F_s = F + s (F m)(x) n.  det F_s = det F for all s.
  const Vector2d n = Vector2d::UnitX();
  const Vector2d m = Vector2d::UnitY();
  const Vector2d a = F * m;
  auto lam2 = [&](double s) { return singular_values((F + s * a * n.transpose()).eval())(1); };
  auto find_crossing = [&](double sign) {
    double hi = sign;
    while (lam2(hi) < gamma2) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = (lo + hi) / 2.0;
      (lam2(mid) < gamma2 ? lo : hi) = mid;
    }
    return hi;
  };
  const double sp = find_crossing(1.0);
  const double sm = find_crossing(-1.0);

  LaminateSpec spec;
  spec.A = F + sm * a * n.transpose();
  spec.B = F + sp * a * n.transpose();
  spec.t = sp / (sp - sm);
  spec.a = (sp - sm) * a;  // B - A
  spec.n_dir = n;
  spec.stripes = stripes;
  return spec;
}

std::vector<LaminateSpec> make_random_twin_laminates(const TwoWellModel& model, int count,
                                                     unsigned seed, int stripes) {
  const auto solutions = solve_twinning(model.U1, model.U2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_int_distribution<int> branch(0, static_cast<int>(solutions.size()) - 1);
  std::vector<LaminateSpec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const auto& sol = solutions[branch(rng)];
    const Matrix2d R = rotation2(angle(rng));
    LaminateSpec spec;
    spec.A = R * sol.Q * model.U1;
    spec.B = R * model.U2;
    spec.t = frac(rng);
    spec.a = -(R * sol.a);
    spec.n_dir = sol.n;
    spec.stripes = stripes;
    out.push_back(spec);
  }
  return out;
}

}  // namespace qcr
