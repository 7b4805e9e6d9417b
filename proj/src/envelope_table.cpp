#include "qcr/envelope_table.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qcr {

namespace {
constexpr char kMagic[8] = {'Q', 'C', 'R', 'T', 'B', 'L', '1', '\0'};
}

MatrixGrid MatrixGrid::cube(double bound, double step, double det_min, double det_max) {
  MatrixGrid g;
  const int count = static_cast<int>(std::llround(2.0 * bound / step)) + 1;
  for (int k = 0; k < 4; ++k) {
    g.lo[k] = -bound;
    g.step[k] = step;
    g.count[k] = count;
  }
  g.det_min = det_min;
  g.det_max = det_max;
  return g;
}

bool MatrixGrid::locate(const Matrix2d& F, std::array<int, 4>& idx, double tol) const {
  const double vals[4] = {F(0, 0), F(0, 1), F(1, 0), F(1, 1)};
  for (int k = 0; k < 4; ++k) {
    const double t = (vals[k] - lo[k]) / step[k];
    const int i = static_cast<int>(std::llround(t));
    if (i < 0 || i >= count[k] || std::abs(t - i) > tol / step[k]) return false;
    idx[k] = i;
  }
  return true;
}

template <typename Scalar>
void save_envelope_table(const EnvelopeTable<Scalar>& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_envelope_table: cannot open " + path);
  out.write(kMagic, sizeof(kMagic));
  const int64_t ndims = 4;
  out.write(reinterpret_cast<const char*>(&ndims), sizeof(ndims));
  for (int k = 0; k < 4; ++k) {
    const int64_t c = table.grid.count[k];
    out.write(reinterpret_cast<const char*>(&c), sizeof(c));
    out.write(reinterpret_cast<const char*>(&table.grid.lo[k]), sizeof(double));
    out.write(reinterpret_cast<const char*>(&table.grid.step[k]), sizeof(double));
  }
  out.write(reinterpret_cast<const char*>(&table.grid.det_min), sizeof(double));
  out.write(reinterpret_cast<const char*>(&table.grid.det_max), sizeof(double));
  const int64_t sweeps = table.sweeps;
  out.write(reinterpret_cast<const char*>(&sweeps), sizeof(sweeps));
  out.write(reinterpret_cast<const char*>(&table.last_max_decrease), sizeof(double));
  std::vector<double> buf(table.grid.count[3]);
  const size_t lines = table.values.size() / table.grid.count[3];
  for (size_t line = 0; line < lines; ++line) {
    const Scalar* src = table.values.data() + line * table.grid.count[3];
    for (int i = 0; i < table.grid.count[3]; ++i) buf[i] = double(src[i]);
    out.write(reinterpret_cast<const char*>(buf.data()), buf.size() * sizeof(double));
  }
  if (!out) throw std::runtime_error("save_envelope_table: write failed for " + path);
}

EnvelopeTableD load_envelope_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_envelope_table: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_envelope_table: bad magic in " + path);
  int64_t ndims = 0;
  in.read(reinterpret_cast<char*>(&ndims), sizeof(ndims));
  if (ndims != 4) throw std::runtime_error("load_envelope_table: unsupported dimension count");
  EnvelopeTableD table;
  for (int k = 0; k < 4; ++k) {
    int64_t c = 0;
    in.read(reinterpret_cast<char*>(&c), sizeof(c));
    in.read(reinterpret_cast<char*>(&table.grid.lo[k]), sizeof(double));
    in.read(reinterpret_cast<char*>(&table.grid.step[k]), sizeof(double));
    table.grid.count[k] = static_cast<int>(c);
  }
  in.read(reinterpret_cast<char*>(&table.grid.det_min), sizeof(double));
  in.read(reinterpret_cast<char*>(&table.grid.det_max), sizeof(double));
  int64_t sweeps = 0;
  in.read(reinterpret_cast<char*>(&sweeps), sizeof(sweeps));
  table.sweeps = static_cast<int>(sweeps);
  in.read(reinterpret_cast<char*>(&table.last_max_decrease), sizeof(double));
  table.values.resize(table.grid.size());
  in.read(reinterpret_cast<char*>(table.values.data()), table.values.size() * sizeof(double));
  if (!in) throw std::runtime_error("load_envelope_table: truncated file " + path);
  return table;
}

template <typename Scalar>
void export_envelope_table_csv(const EnvelopeTable<Scalar>& table, const std::string& path,
                               size_t max_rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_envelope_table_csv: cannot open " + path);
  out << "i0,i1,i2,i3,F00,F01,F10,F11,value\r\n";
  char buf[256];
  size_t rows = 0;
  const auto& n = table.grid.count;
  for (int i0 = 0; i0 < n[0]; ++i0)
    for (int i1 = 0; i1 < n[1]; ++i1)
      for (int i2 = 0; i2 < n[2]; ++i2)
        for (int i3 = 0; i3 < n[3]; ++i3) {
          if (max_rows > 0 && rows >= max_rows) return;
          const double v = double(table.at(i0, i1, i2, i3));
          if (!std::isfinite(v)) continue;
          std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\r\n", i0, i1,
                        i2, i3, table.grid.coord(0, i0), table.grid.coord(1, i1),
                        table.grid.coord(2, i2), table.grid.coord(3, i3), v);
          out << buf;
          ++rows;
        }
}

template void save_envelope_table<float>(const EnvelopeTable<float>&, const std::string&);
template void save_envelope_table<double>(const EnvelopeTable<double>&, const std::string&);
template void export_envelope_table_csv<float>(const EnvelopeTable<float>&, const std::string&,
                                               size_t);
template void export_envelope_table_csv<double>(const EnvelopeTable<double>&, const std::string&,
                                                size_t);

}  // namespace qcr
