#include "qbgk/grid.hpp"

#include "qbgk/errors.hpp"

namespace qbgk {

int ghost_width(Reconstruction r) {
  switch (r) {
    case Reconstruction::None: return 1;
    case Reconstruction::Minmod: return 2;
    case Reconstruction::Weno5: return 3;
  }
  return 3;
}

Grid Grid::make(int dims, std::array<int, 2> n, std::array<double, 2> lower,
                std::array<double, 2> upper, Reconstruction r) {
  if (dims != 1 && dims != 2) throw InvalidArgumentError("grid dimension must be 1 or 2");
  Grid g;
  g.dims = dims;
  g.ghost = ghost_width(r);
  for (int d = 0; d < 2; ++d) {
    if (d >= dims) {
      g.n[d] = 1;
      g.lower[d] = 0.0;
      g.upper[d] = 1.0;
      g.dx[d] = 1.0;
      continue;
    }
    if (n[d] < 1 || !(upper[d] > lower[d])) throw InvalidArgumentError("invalid grid extent");
    g.n[d] = n[d];
    g.lower[d] = lower[d];
    g.upper[d] = upper[d];
    g.dx[d] = (upper[d] - lower[d]) / n[d];
  }
  return g;
}

Grid Grid::from_config(const SimulationConfig& cfg) {
  return make(cfg.dx, cfg.cells, cfg.lower, cfg.upper, cfg.reconstruction);
}

}  // namespace qbgk
