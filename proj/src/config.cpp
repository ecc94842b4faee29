#include "qbgk/config.hpp"

#include <cmath>

#include "qbgk/errors.hpp"
#include "qbgk/grid.hpp"

namespace qbgk {
namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

}  // namespace

double SimulationConfig::knudsen(double x) const {
  if (knudsen_profile == KnudsenProfile::Mixing) return epsilon + 0.005 * std::expm1(3.0 * x);
  return epsilon;
}

void SimulationConfig::validate() const {
  require(dv >= 1 && dv <= 3, "dv", "must be 1, 2 or 3");
  require(dx == 1 || dx == 2, "dx", "must be 1 or 2");
  require(dx <= dv, "dx", "spatial dimension exceeds velocity dimension");
  require(std::isfinite(theta0), "theta0", "must be finite");
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon", "must be positive");
  require(order >= 2 && order <= 60, "order", "must lie in [2, 60]");
  require(center_temperature > 0.0, "center_temperature", "must be positive");
  require(cfl > 0.0 && cfl < 1.0, "cfl", "must lie in (0, 1)");
  require(t_end >= 0.0, "t_end", "must be non-negative");
  require(output_interval >= 0.0, "output_interval", "must be non-negative");
  require(fixed_dt >= 0.0, "dt", "must be non-negative");
  require(max_steps > 0, "max_steps", "must be positive");
  require(steady_tolerance >= 0.0, "steady_tolerance", "must be non-negative");
  require(integration_order >= 1 && integration_order <= 200, "integration_order",
          "must lie in [1, 200]");
  const int ghost = ghost_width(reconstruction);
  for (int d = 0; d < dx; ++d) {
    const std::string axis = d == 0 ? "x" : "y";
    require(cells[d] >= 1, "cells", "need at least one cell along " + axis);
    require(upper[d] > lower[d], "upper", "domain is empty along " + axis);
    const BoundarySpec& lo = boundary[2 * d];
    const BoundarySpec& hi = boundary[2 * d + 1];
    require((lo.kind == BoundaryKind::Periodic) == (hi.kind == BoundaryKind::Periodic),
            "boundary_" + axis, "periodic faces must come in pairs");
    if (lo.kind == BoundaryKind::Periodic) {
      require(cells[d] >= ghost, "cells", "periodic direction shorter than the stencil");
    }
    for (const BoundarySpec* b : {&lo, &hi}) {
      if (b->kind != BoundaryKind::Wall) continue;
      require(b->wall_temperature > 0.0, "wall_temperature", "must be positive");
      require(b->wall_velocity[d] == 0.0, "wall_velocity",
              "normal wall velocity must vanish along " + axis);
    }
  }
  if (initial.kind == InitialKind::Riemann) {
    require(initial.rho_left > 0.0 && initial.rho_right > 0.0, "rho_left", "must be positive");
    require(initial.t_left > 0.0 && initial.t_right > 0.0, "t_left", "must be positive");
  } else {
    require(initial.rho_mean - std::abs(initial.rho_amp) > 0.0, "rho_mean",
            "density must stay positive");
    require(initial.t_mean - std::abs(initial.t_amp) > 0.0, "t_mean",
            "temperature must stay positive");
  }
  require(source_min > 0.0 && source_max >= source_min, "source_min", "need 0 < min <= max");
  for (int d = 0; d < dv; ++d) {
    require(dvm_bound[d] > 0.0, "dvm_bound", "must be positive");
    require(dvm_points[d] >= 8, "dvm_points", "need at least 8 points");
  }
  require(threads >= 0, "threads", "must be non-negative");
}

const char* to_string(TimeScheme s) { return s == TimeScheme::Imex1 ? "imex1" : "imex2"; }

const char* to_string(Reconstruction r) {
  switch (r) {
    case Reconstruction::None: return "none";
    case Reconstruction::Minmod: return "minmod";
    case Reconstruction::Weno5: return "weno5";
  }
  return "?";
}

const char* to_string(BoundaryKind b) {
  switch (b) {
    case BoundaryKind::Periodic: return "periodic";
    case BoundaryKind::Outflow: return "outflow";
    case BoundaryKind::Wall: return "wall";
  }
  return "?";
}

const char* to_string(KnudsenProfile k) {
  return k == KnudsenProfile::Constant ? "constant" : "mixing";
}

const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Sine: return "sine";
    case InitialKind::Riemann: return "riemann";
    case InitialKind::Uniform: return "uniform";
  }
  return "?";
}

}  // namespace qbgk
