#pragma once

#include <array>
#include <memory>
#include <vector>

#include "qcr/energy.hpp"
#include "qcr/matrix_kernel.hpp"

namespace qcr {

/// Simplicial mesh of a polygonal 2D domain.  Cell geometry (area, inverse
/// edge matrix for P1 gradients) is cached on construction.
class TriMesh {
 public:
  TriMesh(std::vector<Vector2d> vertices, std::vector<std::array<int, 3>> triangles);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(triangles_.size()); }
  const Vector2d& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& cell(int c) const { return triangles_[c]; }
  const std::vector<Vector2d>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& cells() const { return triangles_; }

  double area(int c) const { return area_[c]; }
  double total_area() const { return total_area_; }
  Vector2d barycenter(int c) const {
    const auto& t = triangles_[c];
    return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
  }
  /// Inverse of the edge matrix [p1-p0 | p2-p0]; P1 gradients are
  /// [u1-u0 | u2-u0] * edge_inverse.
  const Matrix2d& edge_inverse(int c) const { return edge_inv_[c]; }

  /// Vertices on the boundary (incident to an edge with a single cell).
  const std::vector<int>& boundary_vertices() const { return boundary_vertices_; }

 private:
  std::vector<Vector2d> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<double> area_;
  std::vector<Matrix2d> edge_inv_;
  std::vector<int> boundary_vertices_;
  double total_area_ = 0.0;
};

/// Piecewise-affine vector field on a TriMesh: one R^2 value per vertex, a
/// constant gradient per cell.
class MeshField {
 public:
  MeshField(std::shared_ptr<const TriMesh> mesh, std::vector<Vector2d> values)
      : mesh_(std::move(mesh)), values_(std::move(values)) {}

  /// Field with values F * x (+ offset) at every vertex.
  static MeshField affine(std::shared_ptr<const TriMesh> mesh, const Matrix2d& F,
                          const Vector2d& offset = Vector2d::Zero());

  const TriMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const TriMesh> mesh_ptr() const { return mesh_; }
  const std::vector<Vector2d>& values() const { return values_; }
  std::vector<Vector2d>& values() { return values_; }
  const Vector2d& value(int v) const { return values_[v]; }

  Matrix2d gradient(int c) const {
    const auto& t = mesh_->cell(c);
    Matrix2d D;
    D.col(0) = values_[t[1]] - values_[t[0]];
    D.col(1) = values_[t[2]] - values_[t[0]];
    return D * mesh_->edge_inverse(c);
  }

  /// P1 interpolation inside cell c with barycentric coordinates b.
  Vector2d interpolate(int c, const Vector3d& b) const {
    const auto& t = mesh_->cell(c);
    return b(0) * values_[t[0]] + b(1) * values_[t[1]] + b(2) * values_[t[2]];
  }

  /// Average of Du weighted by cell area (equals the boundary-data gradient
  /// for fields that are affine on the boundary polygon).
  Matrix2d mean_gradient() const;

 private:
  std::shared_ptr<const TriMesh> mesh_;
  std::vector<Vector2d> values_;
};

/// Uniform bin grid for point-in-cell queries.
class PointLocator {
 public:
  explicit PointLocator(std::shared_ptr<const TriMesh> mesh, int bins_per_axis = 0);

  struct Hit {
    int cell = -1;
    Vector3d barycentric = Vector3d::Zero();
  };

  /// Locates the cell containing p.  Points within `tol` outside the mesh are
  /// clamped to the nearest candidate cell; beyond that cell = -1.
  Hit locate(const Vector2d& p, double tol = 1e-9) const;

  const TriMesh& mesh() const { return *mesh_; }

 private:
  std::shared_ptr<const TriMesh> mesh_;
  Vector2d lo_, hi_;
  double bin_size_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> bins_;
};

Vector2d evaluate(const MeshField& field, const PointLocator& locator, const Vector2d& p);

// ---------------------------------------------------------------------------
// Meshers.

/// Structured criss-cross triangulation of [x0,x1] x [y0,y1] with nx x ny
/// quads, each split along the same diagonal.
std::shared_ptr<TriMesh> make_rect_mesh(double x0, double y0, double x1, double y1, int nx,
                                        int ny);

inline std::shared_ptr<TriMesh> make_unit_square_mesh(int n) {
  return make_rect_mesh(0.0, 0.0, 1.0, 1.0, n, n);
}

/// Regular polygon (discrete ball) with N vertices, first vertex at angle 0.
std::vector<Vector2d> regular_polygon(const Vector2d& center, double radius, int sides);

// ---------------------------------------------------------------------------
// Convex polygon utilities (exact within floating point).

double polygon_area(const std::vector<Vector2d>& poly);

/// Clips a convex polygon against the halfplane {x : n.(x - p) <= 0}.
std::vector<Vector2d> clip_polygon_halfplane(const std::vector<Vector2d>& poly,
                                             const Vector2d& p, const Vector2d& n);

/// Intersection of two convex polygons (Sutherland-Hodgman).
std::vector<Vector2d> clip_polygon_convex(const std::vector<Vector2d>& subject,
                                          const std::vector<Vector2d>& clip);

/// Area of the intersection of triangle `c` of `mesh` with a convex polygon.
double cell_polygon_overlap(const TriMesh& mesh, int c, const std::vector<Vector2d>& poly);

// ---------------------------------------------------------------------------
// Integrals.

/// Sum over cells of |cell| * W(Du).  With `finite_part` the constraint
/// indicator of W is ignored (used for fields whose boundary layers leave the
/// constraint set by construction).
double energy(const MeshField& u, const EnergyDensity& W, bool finite_part = false);

double mean_energy(const MeshField& u, const EnergyDensity& W, bool finite_part = false);

/// Integral of det Du over the whole mesh (a null Lagrangian: depends only on
/// boundary values).
double integral_det(const MeshField& u);

/// Minimum per-cell determinant of Du.
double min_cell_det(const MeshField& u);

// ---------------------------------------------------------------------------
// Serialization (mesh JSON: vertices, triangles, values).

void save_mesh_field_json(const MeshField& field, const std::string& path);
MeshField load_mesh_field_json(const std::string& path);

}  // namespace qcr
