#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "qbgk/hermite_basis.hpp"
#include "qbgk/kernels.hpp"

namespace qbgk {

struct Macroscopic {
  double rho = 0.0;
  std::array<double, 3> u{};
  double e0 = 0.0;
  std::array<std::array<double, 3>, 3> p{};  // deviatoric stress
  std::array<double, 3> q{};                 // heat flux
  double theta = 0.0;                        // kinetic temperature 2 e0 / Dv
};

Macroscopic macroscopic_from_coeffs(std::span<const double> f, const BasisSpec& basis);

// Cheaper path for the collision step: rho, u and e0 only.
void density_velocity_energy(std::span<const double> f, const BasisSpec& basis, double& rho,
                             std::array<double, 3>& u, double& e0);

struct Conserved {
  double mass = 0.0;
  std::array<double, 3> momentum{};
  double energy = 0.0;  // (1/2) int |v|^2 f dv
};
Conserved conserved_from_coeffs(std::span<const double> f, const BasisSpec& basis);

using VelocityFunction = std::function<double(std::span<const double>)>;

// f_alpha = (1/alpha!) int f H_alpha dv by tensor Gauss-Hermite quadrature matched to the basis.
// nodes_per_dim = 0 picks max(M + 2, 24).
std::vector<double> project_distribution(const VelocityFunction& f, const BasisSpec& basis,
                                         int nodes_per_dim = 0);

// Moment-system flux operator A_d with the closure f_{alpha+e_d} = 0 at |alpha| = M.
class ConvectionOperator {
 public:
  ConvectionOperator(const BasisSpec& basis, int direction);

  int direction() const { return direction_; }
  std::size_t size() const { return up_.size(); }
  const TriStencil& stencil() const { return stencil_; }
  void apply(const double* f, double* out) const;
  double spectral_radius() const { return radius_; }
  // Wave-speed bounds ubar_d -/+ sqrt(Tbar) r_{M+1}.
  double min_speed() const { return center_ - radius_core_; }
  double max_speed() const { return center_ + radius_core_; }

  ConvectionOperator(const ConvectionOperator&) = delete;
  ConvectionOperator& operator=(const ConvectionOperator&) = delete;
  ConvectionOperator(ConvectionOperator&&) noexcept;
  ConvectionOperator& operator=(ConvectionOperator&&) noexcept;

 private:
  void bind();

  int direction_;
  double center_;
  double radius_core_;
  double radius_;
  std::vector<std::int32_t> up_, down_;
  std::vector<double> up_coef_, down_coef_;
  TriStencil stencil_;
};

std::vector<ConvectionOperator> convection_matrices(const BasisSpec& basis, int spatial_dims);

double spectral_radius(const BasisSpec& basis, int direction);

}  // namespace qbgk
