#pragma once

#include <vector>

#include "isothermic/profile.hpp"
#include "isothermic/surface.hpp"

namespace isothermic {

class GridSpec {
 public:
  // Throws ValidationError unless min < max on both axes and n1, n2 >= 2.
  GridSpec(ParamRect window, int n1, int n2, MaskTolerances tol = {});

  const ParamRect& window() const noexcept { return window_; }
  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  const MaskTolerances& tolerances() const noexcept { return tol_; }

  double u1(int i) const noexcept;
  double u2(int j) const noexcept;
  size_t size() const noexcept { return static_cast<size_t>(n1_) * n2_; }
  size_t index(int i, int j) const noexcept { return static_cast<size_t>(i) * n2_ + j; }

 private:
  ParamRect window_;
  int n1_;
  int n2_;
  MaskTolerances tol_;
};

struct SampleTable {
  GridSpec grid;
  std::vector<SurfacePoint> rows;  // u1-major: rows[i * n2 + j]

  const SurfacePoint& at(int i, int j) const { return rows[grid.index(i, j)]; }
  size_t masked_count() const noexcept;
};

// Rows of constant u1 are split across `threads` workers; the result does not
// depend on the thread count.
SampleTable sample_grid(const ProfilePair& pair, const GridSpec& grid, unsigned threads = 1);

}  // namespace isothermic
