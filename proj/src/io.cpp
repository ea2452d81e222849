#include "wigner/io.hpp"

#include <fstream>

#include "wigner/config.hpp"
#include "wigner/errors.hpp"

namespace wigner {

namespace {

std::ofstream open_csv(const std::string& path, const CsvMeta& meta) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path + "'");
  for (const auto& [k, v] : meta) f << "# " << k << ": " << v << '\n';
  return f;
}

void finish(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

// collocation point indices with each shared element end point kept once
std::vector<std::size_t> distinct_points(const SpatialMesh& mesh) {
  std::vector<std::size_t> idx;
  const int m = mesh.points_per_element;
  for (int e = 0; e < mesh.num_elements; ++e)
    for (int l = (e == 0 ? 0 : 1); l < m; ++l) idx.push_back(static_cast<std::size_t>(e) * m + l);
  return idx;
}

}  // namespace

std::string snapshot_file_name(double t) { return "snapshot_t" + format_double(t) + ".csv"; }

void write_series_csv(const std::string& path, const ObservableSeries& series, const CsvMeta& meta) {
  auto f = open_csv(path, meta);
  f << "t,mass,pr,mean_x,mean_p,var_x,var_p,uncertainty\n";
  for (const auto& r : series.records())
    f << format_double(r.t) << ',' << format_double(r.total_mass) << ',' << format_double(r.pr) << ','
      << format_double(r.mean_x) << ',' << format_double(r.mean_p) << ',' << format_double(r.var_x) << ','
      << format_double(r.var_p) << ',' << format_double(r.uncertainty) << '\n';
  finish(f, path);
}

void write_snapshot_csv(const std::string& path, const WignerState& state, int n_um, const CsvMeta& meta) {
  auto f = open_csv(path, meta);
  f << "x,k,f\n";
  if (n_um > 0) {
    const UniformField u = resample_uniform(state, n_um);
    for (int i = 0; i < u.n; ++i)
      for (int j = 0; j < u.n; ++j)
        f << format_double(u.x(i)) << ',' << format_double(u.k(j)) << ',' << format_double(u(i, j)) << '\n';
  } else {
    const auto& g = state.grid();
    const auto kn = g.k.nodes();
    for (std::size_t p : distinct_points(g.x))
      for (std::size_t j = 0; j < state.num_k(); ++j)
        f << format_double(g.x.points[p]) << ',' << format_double(kn[j]) << ',' << format_double(state(p, j))
          << '\n';
  }
  finish(f, path);
}

void write_marginal_csv(const std::string& path, const PhaseGrid& grid, const MarginalSnapshot& snap,
                        const CsvMeta& meta) {
  auto f = open_csv(path, meta);
  f << "x1,x2,fsm\n";
  const std::size_t nx = grid.x.size();
  if (snap.fsm.size() != nx * nx) throw ParameterError("marginal size does not match the grid");
  const auto idx = distinct_points(grid.x);
  for (std::size_t p1 : idx)
    for (std::size_t p2 : idx)
      f << format_double(grid.x.points[p1]) << ',' << format_double(grid.x.points[p2]) << ','
        << format_double(snap.fsm[p1 * nx + p2]) << '\n';
  finish(f, path);
}

void write_table_csv(const std::string& path, const KernelTable& table, const CsvMeta& meta) {
  if (table.four_dimensional()) throw ParameterError("table CSV export covers one-dimensional tables");
  auto f = open_csv(path, meta);
  f << "x,nu,re_c,im_c\n";
  const auto& g = table.grid();
  const int n = g.k.num_points;
  for (std::size_t p : distinct_points(g.x))
    for (int nu = -n / 2 + 1; nu <= n / 2; ++nu) {
      const cplx c = table.mode(p, nu);
      f << format_double(g.x.points[p]) << ',' << nu << ',' << format_double(c.real()) << ','
        << format_double(c.imag()) << '\n';
    }
  finish(f, path);
}

}  // namespace wigner
