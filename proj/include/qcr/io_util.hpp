#pragma once

#include <string>
#include <vector>

#include "qcr/mesh.hpp"

namespace qcr {

/// RFC-4180-style CSV writer: header row, CRLF line ends, '.' decimal
/// separator, doubles at full precision (byte-stable across reruns).
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvWriter& begin_row();
  CsvWriter& add(double v);
  CsvWriter& add(int v);
  CsvWriter& add(const std::string& v);
  void write(const std::string& path) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Standalone SVG heatmap of a per-cell scalar field (no scripts).
void save_cell_heatmap_svg(const TriMesh& mesh, const std::vector<double>& cell_values,
                           const std::string& path, const std::string& title = "");

}  // namespace qcr
