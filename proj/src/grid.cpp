#include "isothermic/grid.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "isothermic/errors.hpp"

namespace isothermic {

GridSpec::GridSpec(ParamRect window, int n1, int n2, MaskTolerances tol)
    : window_(window), n1_(n1), n2_(n2), tol_(tol) {
  const bool finite = std::isfinite(window.u1_min) && std::isfinite(window.u1_max) &&
                      std::isfinite(window.u2_min) && std::isfinite(window.u2_max);
  if (!finite || !(window.u1_min < window.u1_max) || !(window.u2_min < window.u2_max)) {
    throw ValidationError("grid window requires u1_min < u1_max and u2_min < u2_max");
  }
  if (n1 < 2 || n2 < 2) throw ValidationError("grid needs at least 2 vertices per axis");
  if (!(tol.domain >= 0.0) || !(tol.singular >= 0.0)) {
    throw ValidationError("mask tolerances must be non-negative");
  }
}

double GridSpec::u1(int i) const noexcept {
  return window_.u1_min + i * (window_.u1_max - window_.u1_min) / (n1_ - 1);
}

double GridSpec::u2(int j) const noexcept {
  return window_.u2_min + j * (window_.u2_max - window_.u2_min) / (n2_ - 1);
}

size_t SampleTable::masked_count() const noexcept {
  return static_cast<size_t>(
      std::count_if(rows.begin(), rows.end(), [](const SurfacePoint& p) { return !p.flags.ok(); }));
}

SampleTable sample_grid(const ProfilePair& pair, const GridSpec& grid, unsigned threads) {
  SampleTable table{grid, std::vector<SurfacePoint>(grid.size())};
  auto fill_rows = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const double u1 = grid.u1(i);
      for (int j = 0; j < grid.n2(); ++j) {
        table.rows[grid.index(i, j)] = eval_surface_point(pair, u1, grid.u2(j), grid.tolerances());
      }
    }
  };

  const int workers = static_cast<int>(std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(grid.n1())));
  if (workers == 1) {
    fill_rows(0, grid.n1());
    return table;
  }
  std::vector<std::thread> pool;
  const int chunk = (grid.n1() + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(grid.n1(), begin + chunk);
    if (begin < end) pool.emplace_back(fill_rows, begin, end);
  }
  for (auto& t : pool) t.join();
  return table;
}

}  // namespace isothermic
