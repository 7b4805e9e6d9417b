#pragma once

#include <functional>
#include <vector>

#include "qcr/matrix_kernel.hpp"
#include "qcr/mesh.hpp"

namespace qcr {

struct TranslationOptions {
  int lattice_points = 1000;   ///< candidate budget (regular lattice in B(x0, r/2))
  double margin = 0.05;        ///< quadrature slack allowed on top of the bound
  bool compute_average = false;  ///< also evaluate the average over all candidates
};

struct TranslationResult {
  bool found = false;
  Vector2d a0 = Vector2d::Zero();
  double integral = 0.0;       ///< discrete integral of f~ for the returned a0
  double bound = 0.0;          ///< (1/|B_r|) ||f||_L1(B(x0,2r)) ||g||_L1(B_r)
  double min_observed = 0.0;   ///< smallest candidate integral seen
  double average_integral = 0.0;  ///< mean over all candidates (if requested)
  int candidates = 0;
};

/// Discrete translation selection: picks the first lattice point a0 in
/// B(x0, r/2) for which
///   integral over B(a0,r) of f(psi(x-a0)+a0) g(x-a0) dx
/// meets the averaging bound (1/|B_r|) ||f|| ||g|| up to the configured
/// margin.  Existence up to quadrature slack is guaranteed because the bound
/// dominates the average over all translations.
///
/// f is evaluated pointwise (cellwise-constant fields work through a point
/// lookup) and must be defined on B(x0, 2r); f_l1 is its integral there.
/// g is cellwise on `g_mesh` (a mesh of B_r centered at the origin) and psi
/// lives on the same mesh with range in closure(B_r).
TranslationResult select_translation(const std::function<double(const Vector2d&)>& f,
                                     double f_l1, const TriMesh& g_mesh,
                                     const std::vector<double>& g_cells, const MeshField& psi,
                                     const Vector2d& x0, double r,
                                     const TranslationOptions& opts = {});

}  // namespace qcr
