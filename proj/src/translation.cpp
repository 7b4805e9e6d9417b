#include "qcr/translation.hpp"

#include <cmath>
#include <stdexcept>

namespace qcr {

TranslationResult select_translation(const std::function<double(const Vector2d&)>& f,
                                     double f_l1, const TriMesh& g_mesh,
                                     const std::vector<double>& g_cells, const MeshField& psi,
                                     const Vector2d& x0, double r,
                                     const TranslationOptions& opts) {
  if (g_cells.size() != static_cast<size_t>(g_mesh.num_cells()))
    throw std::invalid_argument("select_translation: g must be cellwise on the g mesh");
  TranslationResult res;
  res.bound = f_l1 * [&] {
    double g_l1 = 0.0;
    for (int c = 0; c < g_mesh.num_cells(); ++c) g_l1 += g_mesh.area(c) * g_cells[c];
    return g_l1;
  }() / (M_PI * r * r);

  // Precompute psi at barycenters once; after the change of variables the
  // candidate integral is sum_c |c| g_c f(psi(bary_c) + a0).
  std::vector<Vector2d> mapped;
  std::vector<double> weight;
  mapped.reserve(g_mesh.num_cells());
  weight.reserve(g_mesh.num_cells());
  for (int c = 0; c < g_mesh.num_cells(); ++c) {
    if (g_cells[c] == 0.0) continue;
    const auto& t = g_mesh.cell(c);
    const Vector2d p =
        (psi.value(t[0]) + psi.value(t[1]) + psi.value(t[2])) / 3.0;
    if (p.norm() > r * (1.0 + 1e-9))
      throw std::invalid_argument("select_translation: psi range leaves closure(B_r)");
    mapped.push_back(p);
    weight.push_back(g_mesh.area(c) * g_cells[c]);
  }

  auto candidate_integral = [&](const Vector2d& a0) {
    double s = 0.0;
    for (size_t i = 0; i < mapped.size(); ++i) s += weight[i] * f(mapped[i] + a0);
    return s;
  };

  // Regular lattice in B(x0, r/2), scanned in lexicographic order.
  const int n = std::max(3, static_cast<int>(std::floor(std::sqrt(double(opts.lattice_points)))));
  const double threshold = res.bound * (1.0 + opts.margin);
  res.min_observed = kInf;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vector2d a0 = x0 + Vector2d(-r / 2 + r * (i + 0.5) / n, -r / 2 + r * (j + 0.5) / n);
      if ((a0 - x0).norm() > r / 2) continue;
      const double h = candidate_integral(a0);
      ++res.candidates;
      sum += h;
      if (h < res.min_observed) res.min_observed = h;
      if (!res.found && h <= threshold) {
        res.found = true;
        res.a0 = a0;
        res.integral = h;
        if (!opts.compute_average) {
          res.average_integral = sum / res.candidates;
          return res;
        }
      }
    }
  }
  if (res.candidates > 0) res.average_integral = sum / res.candidates;
  return res;
}

}  // namespace qcr
