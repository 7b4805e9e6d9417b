#include "qcr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qcr {

TriMesh::TriMesh(std::vector<Vector2d> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  area_.reserve(triangles_.size());
  edge_inv_.reserve(triangles_.size());
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : triangles_) {
    const Vector2d e1 = vertices_[t[1]] - vertices_[t[0]];
    const Vector2d e2 = vertices_[t[2]] - vertices_[t[0]];
    Matrix2d E;
    E.col(0) = e1;
    E.col(1) = e2;
    const double det = determinant(E);
    if (det <= 0.0) throw std::invalid_argument("TriMesh: cells must be positively oriented");
    area_.push_back(det / 2.0);
    total_area_ += det / 2.0;
    edge_inv_.push_back(E.inverse());
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_count[{a, b}]++;
    }
  }
  std::vector<char> on_boundary(vertices_.size(), 0);
  for (const auto& [e, cnt] : edge_count) {
    if (cnt == 1) {
      on_boundary[e.first] = 1;
      on_boundary[e.second] = 1;
    }
  }
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
    if (on_boundary[v]) boundary_vertices_.push_back(v);
}

MeshField MeshField::affine(std::shared_ptr<const TriMesh> mesh, const Matrix2d& F,
                            const Vector2d& offset) {
  std::vector<Vector2d> vals;
  vals.reserve(mesh->num_vertices());
  for (int v = 0; v < mesh->num_vertices(); ++v) vals.push_back(F * mesh->vertex(v) + offset);
  return MeshField(std::move(mesh), std::move(vals));
}

Matrix2d MeshField::mean_gradient() const {
  Matrix2d sum = Matrix2d::Zero();
  for (int c = 0; c < mesh_->num_cells(); ++c) sum += mesh_->area(c) * gradient(c);
  return sum / mesh_->total_area();
}

PointLocator::PointLocator(std::shared_ptr<const TriMesh> mesh, int bins_per_axis)
    : mesh_(std::move(mesh)) {
  lo_ = Vector2d(kInf, kInf);
  hi_ = -lo_;
  for (const auto& v : mesh_->vertices()) {
    lo_ = lo_.cwiseMin(v);
    hi_ = hi_.cwiseMax(v);
  }
  const double extent = std::max((hi_ - lo_).maxCoeff(), 1e-12);
  const int n = bins_per_axis > 0
                    ? bins_per_axis
                    : std::max(4, static_cast<int>(std::sqrt(double(mesh_->num_cells()))));
  bin_size_ = extent / n;
  nx_ = std::max(1, static_cast<int>(std::ceil((hi_.x() - lo_.x()) / bin_size_)));
  ny_ = std::max(1, static_cast<int>(std::ceil((hi_.y() - lo_.y()) / bin_size_)));
  bins_.assign(static_cast<size_t>(nx_) * ny_, {});
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    const auto& t = mesh_->cell(c);
    Vector2d clo(kInf, kInf), chi = -clo;
    for (int k = 0; k < 3; ++k) {
      clo = clo.cwiseMin(mesh_->vertex(t[k]));
      chi = chi.cwiseMax(mesh_->vertex(t[k]));
    }
    const int i0 = std::clamp(int((clo.x() - lo_.x()) / bin_size_), 0, nx_ - 1);
    const int i1 = std::clamp(int((chi.x() - lo_.x()) / bin_size_), 0, nx_ - 1);
    const int j0 = std::clamp(int((clo.y() - lo_.y()) / bin_size_), 0, ny_ - 1);
    const int j1 = std::clamp(int((chi.y() - lo_.y()) / bin_size_), 0, ny_ - 1);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) bins_[static_cast<size_t>(j) * nx_ + i].push_back(c);
  }
}

PointLocator::Hit PointLocator::locate(const Vector2d& p, double tol) const {
  const int i = std::clamp(int((p.x() - lo_.x()) / bin_size_), 0, nx_ - 1);
  const int j = std::clamp(int((p.y() - lo_.y()) / bin_size_), 0, ny_ - 1);
  Hit best;
  double best_defect = kInf;
  auto consider = [&](int c) {
    const auto& t = mesh_->cell(c);
    const Vector2d d = p - mesh_->vertex(t[0]);
    const Vector2d ab = mesh_->edge_inverse(c).transpose() * d;  // barycentric b1, b2
    const Vector3d b(1.0 - ab.x() - ab.y(), ab.x(), ab.y());
    const double defect = -std::min({b(0), b(1), b(2)});
    if (defect < best_defect) {
      best_defect = defect;
      best.cell = c;
      best.barycentric = b;
    }
  };
  for (int dj = 0; dj <= 2; ++dj) {
    for (int di = 0; di <= 2; ++di) {
      const int ii = i + (di == 2 ? -1 : di);
      const int jj = j + (dj == 2 ? -1 : dj);
      if (ii < 0 || ii >= nx_ || jj < 0 || jj >= ny_) continue;
      for (int c : bins_[static_cast<size_t>(jj) * nx_ + ii]) consider(c);
      if (di == 0 && dj == 0 && best_defect <= 0.0) return best;  // strictly inside
    }
  }
  if (best_defect <= tol) {
    // Clamp barycentric coordinates for points marginally outside.
    Vector3d b = best.barycentric.cwiseMax(0.0);
    best.barycentric = b / b.sum();
    return best;
  }
  // Fall back to a full scan (rare: query far from the covered bins).
  for (int c = 0; c < mesh_->num_cells(); ++c) consider(c);
  if (best_defect <= tol) {
    Vector3d b = best.barycentric.cwiseMax(0.0);
    best.barycentric = b / b.sum();
    return best;
  }
  return Hit{};
}

Vector2d evaluate(const MeshField& field, const PointLocator& locator, const Vector2d& p) {
  const auto hit = locator.locate(p);
  if (hit.cell < 0) throw std::runtime_error("evaluate: point outside mesh");
  return field.interpolate(hit.cell, hit.barycentric);
}

std::shared_ptr<TriMesh> make_rect_mesh(double x0, double y0, double x1, double y1, int nx,
                                        int ny) {
  std::vector<Vector2d> verts;
  verts.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      verts.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<size_t>(nx) * ny * 2);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return std::make_shared<TriMesh>(std::move(verts), std::move(tris));
}

std::vector<Vector2d> regular_polygon(const Vector2d& center, double radius, int sides) {
  std::vector<Vector2d> poly;
  poly.reserve(sides);
  for (int k = 0; k < sides; ++k) {
    const double t = 2.0 * M_PI * k / sides;
    poly.emplace_back(center.x() + radius * std::cos(t), center.y() + radius * std::sin(t));
  }
  return poly;
}

double polygon_area(const std::vector<Vector2d>& poly) {
  double a = 0.0;
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Vector2d& p = poly[i];
    const Vector2d& q = poly[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return a / 2.0;
}

std::vector<Vector2d> clip_polygon_halfplane(const std::vector<Vector2d>& poly,
                                             const Vector2d& p, const Vector2d& n) {
  std::vector<Vector2d> out;
  const int m = static_cast<int>(poly.size());
  if (m == 0) return out;
  out.reserve(m + 2);
  for (int i = 0; i < m; ++i) {
    const Vector2d& a = poly[i];
    const Vector2d& b = poly[(i + 1) % m];
    const double da = n.dot(a - p);
    const double db = n.dot(b - p);
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db <= 0.0)) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

std::vector<Vector2d> clip_polygon_convex(const std::vector<Vector2d>& subject,
                                          const std::vector<Vector2d>& clip) {
  std::vector<Vector2d> poly = subject;
  const int n = static_cast<int>(clip.size());
  for (int i = 0; i < n && !poly.empty(); ++i) {
    const Vector2d& a = clip[i];
    const Vector2d& b = clip[(i + 1) % n];
    const Vector2d edge = b - a;
    const Vector2d outward(edge.y(), -edge.x());  // clip polygon is CCW
    poly = clip_polygon_halfplane(poly, a, outward);
  }
  return poly;
}

double cell_polygon_overlap(const TriMesh& mesh, int c, const std::vector<Vector2d>& poly) {
  const auto& t = mesh.cell(c);
  const std::vector<Vector2d> tri{mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2])};
  const auto inter = clip_polygon_convex(tri, poly);
  return inter.size() >= 3 ? polygon_area(inter) : 0.0;
}

double energy(const MeshField& u, const EnergyDensity& W, bool finite_part) {
  double e = 0.0;
  for (int c = 0; c < u.mesh().num_cells(); ++c) {
    const Matrix2d D = u.gradient(c);
    const ExtendedReal w = finite_part ? W.finite_part(D) : W(D);
    if (!w.is_finite()) return kInf;
    e += u.mesh().area(c) * w.value();
  }
  return e;
}

double mean_energy(const MeshField& u, const EnergyDensity& W, bool finite_part) {
  return energy(u, W, finite_part) / u.mesh().total_area();
}

double integral_det(const MeshField& u) {
  double s = 0.0;
  for (int c = 0; c < u.mesh().num_cells(); ++c) s += u.mesh().area(c) * determinant(u.gradient(c));
  return s;
}

double min_cell_det(const MeshField& u) {
  double m = kInf;
  for (int c = 0; c < u.mesh().num_cells(); ++c) m = std::min(m, determinant(u.gradient(c)));
  return m;
}

void save_mesh_field_json(const MeshField& field, const std::string& path) {
  nlohmann::json j;
  auto& jv = j["vertices"] = nlohmann::json::array();
  for (const auto& v : field.mesh().vertices()) jv.push_back({v.x(), v.y()});
  auto& jt = j["triangles"] = nlohmann::json::array();
  for (const auto& t : field.mesh().cells()) jt.push_back({t[0], t[1], t[2]});
  auto& jw = j["values"] = nlohmann::json::array();
  for (const auto& v : field.values()) jw.push_back({v.x(), v.y()});
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mesh_field_json: cannot open " + path);
  out << j.dump() << "\n";
}

MeshField load_mesh_field_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mesh_field_json: cannot open " + path);
  nlohmann::json j;
  in >> j;
  std::vector<Vector2d> verts;
  for (const auto& v : j.at("vertices")) verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  std::vector<std::array<int, 3>> tris;
  for (const auto& t : j.at("triangles"))
    tris.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
  std::vector<Vector2d> vals;
  for (const auto& v : j.at("values")) vals.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  auto mesh = std::make_shared<TriMesh>(std::move(verts), std::move(tris));
  return MeshField(std::move(mesh), std::move(vals));
}

}  // namespace qcr
