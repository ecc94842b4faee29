#pragma once

#include <array>
#include <cstddef>

#include "qbgk/config.hpp"

namespace qbgk {

// Ghost layers needed by a reconstruction: the face values of the first ghost cell are
// reconstructed too, so the width is one more than the stencil radius.
int ghost_width(Reconstruction r);

// Uniform cell-centred grid in one or two dimensions. Cells are stored x-fastest.
struct Grid {
  int dims = 1;
  std::array<int, 2> n{1, 1};
  std::array<double, 2> lower{0.0, 0.0};
  std::array<double, 2> upper{1.0, 1.0};
  std::array<double, 2> dx{1.0, 1.0};
  int ghost = 1;

  static Grid make(int dims, std::array<int, 2> n, std::array<double, 2> lower,
                   std::array<double, 2> upper, Reconstruction r);
  static Grid from_config(const SimulationConfig& cfg);

  std::size_t cells() const { return static_cast<std::size_t>(n[0]) * n[1]; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n[0] + i; }
  double center(int d, int i) const { return lower[d] + (i + 0.5) * dx[d]; }
  double cell_volume() const { return dims == 1 ? dx[0] : dx[0] * dx[1]; }
};

}  // namespace qbgk
