#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qbgk/boundary.hpp"
#include "qbgk/equilibrium.hpp"
#include "qbgk/errors.hpp"
#include "qbgk/moment_system.hpp"

using namespace qbgk;

namespace {

BoundarySpec wall_at(double temperature, std::array<double, 3> velocity = {}) {
  BoundarySpec w;
  w.kind = BoundaryKind::Wall;
  w.wall_temperature = temperature;
  w.wall_velocity = velocity;
  return w;
}

// Lines with the normal direction restricted to one half line; tangential lines are trapezoids.
std::vector<oracle::Line> half_lines(int dv, int normal, double vn0, bool upper) {
  std::vector<oracle::Line> lines(dv, oracle::trapezoid(0.0, 12.0, 121));
  lines[normal] = upper ? oracle::gauss_panels(vn0, vn0 + 14.0, 28) : oracle::gauss_panels(vn0 - 14.0, vn0, 28);
  return lines;
}

struct Composite {
  std::vector<double> ghost;  // oracle projection
  double net_flux = 0.0;      // int (v_n - u_n^w) f dv
};

// Interior expansion on the half heading into the wall, scaled wall Maxwellian on the other.
Composite composite_oracle(std::span<const double> interior, const BasisSpec& b, int normal, int side,
                           const BoundarySpec& w, const WallState& st, double theta0) {
  const int dv = b.dv();
  const double vn0 = w.wall_velocity[normal];
  auto f_in = [&](const double* v) { return evaluate_expansion(interior, b, std::span<const double>(v, dv)); };
  auto f_wall = [&](const double* v) {
    return st.scale * oracle::quantum_maxwellian(dv, v, w.wall_velocity.data(), w.wall_temperature, st.wall.z, theta0);
  };
  const auto in_lines = half_lines(dv, normal, vn0, side > 0);
  const auto wall_lines = half_lines(dv, normal, vn0, side < 0);
  std::vector<double> ubar(b.center_velocity());
  ubar.resize(3, 0.0);
  Composite c;
  const auto a = oracle::project(dv, b.indices(), ubar.data(), b.center_temperature(), in_lines, f_in);
  const auto g = oracle::project(dv, b.indices(), ubar.data(), b.center_temperature(), wall_lines, f_wall);
  for (std::size_t k = 0; k < a.size(); ++k) c.ghost.push_back(a[k] + g[k]);
  c.net_flux = oracle::tensor_integral(dv, in_lines, [&](const double* v) { return (v[normal] - vn0) * f_in(v); }) +
               oracle::tensor_integral(dv, wall_lines, [&](const double* v) { return (v[normal] - vn0) * f_wall(v); });
  return c;
}

}  // namespace

TEST(Wall, DetailedBalanceClassical) {
  for (int side : {-1, 1}) {
    BasisSpec b(2, 8, {0, 0}, 1.0);
    const QuantumParams p = params_from_density_temperature(0.8, 1.0, 0.0, 2);
    const std::vector<double> u = {0, 0};
    const auto interior = maxwellian_coeffs(p, u, b);
    WallState st;
    const auto ghost = wall_boundary_ghost(interior, 0, side, wall_at(1.0), 0.0, b, &st);
    EXPECT_NEAR(st.wall.z / p.z, 1.0, 1e-12);
    for (std::size_t k = 0; k < ghost.size(); ++k) EXPECT_NEAR(ghost[k], interior[k], 1e-12) << k;
    EXPECT_NEAR(st.residual, 0.0, 1e-13);
  }
}

TEST(Wall, DetailedBalanceQuantum) {
  for (double theta0 : {-4.0, 4.0}) {
    BasisSpec b(3, 12, {0, 0, 0}, 1.0);
    const QuantumParams p = params_from_density_temperature(0.6, 1.0, theta0, 3);
    const std::vector<double> u = {0, 0, 0};
    const auto interior = maxwellian_coeffs(p, u, b);
    WallState st;
    const auto ghost = wall_boundary_ghost(interior, 1, 1, wall_at(1.0), theta0, b, &st);
    // only the truncation of the interior expansion separates the two
    EXPECT_NEAR(st.wall.y / p.y, 1.0, 1e-4) << theta0;
    for (std::size_t k = 0; k < ghost.size(); ++k) EXPECT_NEAR(ghost[k], interior[k], 1e-4) << k;
    EXPECT_FALSE(st.adjusted);
  }
}

TEST(Wall, ClassicalClosedForm) {
  // z^w (2 pi T^w)^{(D-1)/2} T^w equals the mass flux the interior sends into the wall
  for (int dv : {1, 2, 3}) {
    BasisSpec b(dv, 6, std::vector<double>(dv, 0.1), 1.2);
    const QuantumParams p = params_from_density_temperature(1.1, 0.9, 0.0, dv);
    std::vector<double> u(dv, 0.0);
    u[0] = 0.3;
    const auto interior = maxwellian_coeffs(p, u, b);
    const BoundarySpec w = wall_at(1.3, {0.0, dv > 1 ? 0.2 : 0.0, 0.0});
    for (int side : {-1, 1}) {
      const WallOperator op(b, 0, side, w, 0.0);
      std::vector<double> ghost(b.size());
      const WallState st = op.apply(interior, ghost);

      // outgoing flux by direct quadrature of the interior expansion
      const auto lines = half_lines(dv, 0, 0.0, side > 0);
      const double flux = oracle::tensor_integral(dv, lines, [&](const double* v) {
        return std::abs(v[0]) * evaluate_expansion(interior, b, std::span<const double>(v, dv));
      });
      EXPECT_NEAR(st.outgoing_flux, flux, 1e-10 * flux) << dv << " " << side;
      const double z = flux / (std::pow(2 * std::numbers::pi * 1.3, 0.5 * (dv - 1)) * 1.3);
      EXPECT_NEAR(st.wall.z, z, 1e-8 * z);

      // linear in the outgoing flux
      std::vector<double> doubled(interior);
      for (double& x : doubled) x *= 2.0;
      const WallState st2 = op.apply(doubled, ghost);
      EXPECT_NEAR(st2.wall.z, 2.0 * st.wall.z, 1e-12 * st.wall.z);
    }
  }
}

TEST(Wall, GhostMatchesCompositeProjection) {
  for (double theta0 : {0.0, -2.0, 3.0}) {
    BasisSpec b(2, 6, {0.1, 0.0}, 1.1);
    const QuantumParams p = params_from_density_temperature(0.7, 0.9, theta0, 2);
    const std::vector<double> u = {0.15, -0.1};
    std::vector<double> interior = maxwellian_coeffs(p, u, b);
    interior[b.position({2, 1, 0})] += 0.01;  // some non-equilibrium content
    const BoundarySpec w = wall_at(1.2, {0.0, 0.4, 0.0});
    for (int side : {-1, 1}) {
      WallState st;
      const auto ghost = wall_boundary_ghost(interior, 0, side, w, theta0, b, &st);
      const Composite ref = composite_oracle(interior, b, 0, side, w, st, theta0);
      for (std::size_t k = 0; k < ghost.size(); ++k) {
        EXPECT_NEAR(ghost[k], ref.ghost[k], 1e-9) << theta0 << " " << side << " " << k;
      }
      // zero net normal mass flux, both as projected and as the pointwise composite
      EXPECT_LE(std::abs(st.residual), 1e-10);
      EXPECT_LE(std::abs(ref.net_flux), 1e-9);
    }
  }
}

TEST(Wall, MirroredFacesGiveMirroredGhosts) {
  BasisSpec b(3, 5, {0, 0, 0}, 1.0);
  const QuantumParams p = params_from_density_temperature(1.0, 0.8, 2.0, 3);
  const std::vector<double> u = {0.2, 0.1, 0.0}, um = {-0.2, 0.1, 0.0};
  const auto in = maxwellian_coeffs(p, u, b), in_m = maxwellian_coeffs(p, um, b);
  const auto lo = wall_boundary_ghost(in, 0, -1, wall_at(1.0, {0, 0.3, 0}), 2.0, b);
  const auto hi = wall_boundary_ghost(in_m, 0, 1, wall_at(1.0, {0, 0.3, 0}), 2.0, b);
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double sign = b.index(k)[0] % 2 ? -1.0 : 1.0;
    EXPECT_NEAR(hi[k], sign * lo[k], 1e-12) << k;
  }
}

TEST(Wall, AdjustedBoseBranch) {
  // a hot dense interior against a cold wall: no wall fugacity below 1 absorbs the flux
  const double theta0 = -1.0;
  BasisSpec b(3, 8, {0, 0, 0}, 1.0);
  const QuantumParams p = params_from_density_temperature(1.0, 1.0, theta0, 3);
  const std::vector<double> u = {0, 0, 0};
  const auto interior = maxwellian_coeffs(p, u, b);
  WallState st;
  const auto ghost = wall_boundary_ghost(interior, 2, -1, wall_at(0.1), theta0, b, &st);
  EXPECT_TRUE(st.adjusted);
  EXPECT_DOUBLE_EQ(st.wall.y, 1.0);
  EXPECT_GT(st.scale, 1.0);
  EXPECT_LE(std::abs(st.residual), 1e-10);
  for (double g : ghost) EXPECT_TRUE(std::isfinite(g));

  // the unadjusted Bose solve lands strictly inside (0, 1)
  WallState warm;
  wall_boundary_ghost(interior, 2, -1, wall_at(1.0), theta0, b, &warm);
  EXPECT_FALSE(warm.adjusted);
  EXPECT_GT(warm.wall.y, 0.0);
  EXPECT_LT(warm.wall.y, 1.0);
  EXPECT_LE(std::abs(warm.residual), 1e-10);
}

TEST(Wall, RejectsBadInput) {
  BasisSpec b(2, 4, {0, 0}, 1.0);
  EXPECT_THROW(WallOperator(b, 0, 1, wall_at(1.0, {0.1, 0, 0}), 1.0), InvalidArgumentError);
  EXPECT_THROW(WallOperator(b, 0, 0, wall_at(1.0), 1.0), InvalidArgumentError);
  EXPECT_THROW(WallOperator(b, 0, 1, wall_at(0.0), 1.0), InvalidArgumentError);
  const WallOperator op(b, 0, 1, wall_at(1.0), 1.0);
  std::vector<double> zero(b.size(), 0.0), ghost(b.size());
  EXPECT_THROW(op.apply(zero, ghost), BoundarySolveError);
}
