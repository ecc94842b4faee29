#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qbgk/config.hpp"
#include "qbgk/equilibrium.hpp"
#include "qbgk/hermite_basis.hpp"

namespace qbgk {

struct WallState {
  QuantumParams wall;           // wall Maxwellian; T = T^w
  double scale = 1.0;           // C^w, != 1 only on the adjusted Bose branch
  bool adjusted = false;
  double outgoing_flux = 0.0;   // mass flux carried towards the wall by the interior half
  double residual = 0.0;        // net normal mass flux of the projected composite
};

// Maxwell-type quantum wall on one axis-aligned face. The ghost state is the Hermite projection
// of the half-space composite: interior distribution for velocities heading into the wall,
// wall Maxwellian (fugacity chosen for zero normal mass flux) for velocities leaving it.
class WallOperator {
 public:
  // side = -1 for the lower face (outer normal -e_d), +1 for the upper face.
  WallOperator(const BasisSpec& basis, int direction, int side, const BoundarySpec& wall,
               double theta0);

  int direction() const { return direction_; }
  int side() const { return side_; }

  // Mass flux of `interior` through the face in the outgoing half-space.
  double outgoing_flux(std::span<const double> interior) const;

  // Fills `ghost` (basis.size()) from the adjacent interior cell.
  WallState apply(std::span<const double> interior, std::span<double> ghost,
                  std::optional<double> seed_y = std::nullopt) const;

  // Normal mass flux int v_n g dv of a coefficient vector.
  double normal_flux(std::span<const double> g) const;

 private:
  const BasisSpec* basis_;
  int direction_;
  int side_;
  BoundarySpec wall_;
  double theta0_;
  int dv_;
  double flux_order_;  // (D+1)/2
  double flux_factor_;  // pi^{(D-1)/2} (2T^w)^{(D+1)/2} / 2

  // Interior half: ghost[row] += coef * f[col].
  std::vector<std::int32_t> half_row_start_, half_col_;
  std::vector<double> half_coef_;
  // Outgoing flux weights over the pure-normal coefficients f_{a e_n}.
  std::vector<std::int32_t> flux_pos_;
  std::vector<double> flux_weight_;
  // Wall half: ghost = W * amplitude(orders).
  std::vector<double> orders_;
  std::vector<double> wall_matrix_;  // size x orders_.size(), row-major
};

// One-shot convenience wrapper.
std::vector<double> wall_boundary_ghost(std::span<const double> interior, int direction, int side,
                                        const BoundarySpec& wall, double theta0,
                                        const BasisSpec& basis, WallState* state = nullptr);

}  // namespace qbgk
