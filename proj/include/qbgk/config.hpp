#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qbgk {

enum class TimeScheme { Imex1, Imex2 };
enum class Reconstruction { None, Minmod, Weno5 };
enum class BoundaryKind { Periodic, Outflow, Wall };
enum class KnudsenProfile { Constant, Mixing };
enum class InitialKind { Sine, Riemann, Uniform };

// Face order: x_lo, x_hi, y_lo, y_hi.
enum Face : int { kXLo = 0, kXHi = 1, kYLo = 2, kYHi = 3 };

struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::Periodic;
  std::array<double, 3> wall_velocity{};
  double wall_temperature = 1.0;

  bool operator==(const BoundarySpec&) const = default;
};

// Equilibrium initial data. Sine: rho = rho_mean + rho_amp sin(2 pi x), same for T, u = 0.
// Riemann: (rho_left, T_left) for x < split, (rho_right, T_right) otherwise, u = 0.
// Uniform: (rho_mean, T_mean, velocity).
struct InitialData {
  InitialKind kind = InitialKind::Uniform;
  double rho_mean = 1.0, rho_amp = 0.0;
  double t_mean = 1.0, t_amp = 0.0;
  double rho_left = 1.0, t_left = 1.0, rho_right = 0.125, t_right = 0.25;
  double split = 0.5;
  std::array<double, 3> velocity{};

  bool operator==(const InitialData&) const = default;
};

struct SimulationConfig {
  std::string scenario = "custom";
  int dv = 3;
  int dx = 1;
  double theta0 = 0.0;

  KnudsenProfile knudsen_profile = KnudsenProfile::Constant;
  double epsilon = 1.0;  // constant value, or eps_0 of the mixing profile

  int order = 10;
  std::array<double, 3> center_velocity{};
  double center_temperature = 1.0;

  double cfl = 0.2;
  TimeScheme scheme = TimeScheme::Imex1;
  Reconstruction reconstruction = Reconstruction::None;
  double t_end = 0.1;
  double output_interval = 0.0;  // 0: final snapshot only
  double fixed_dt = 0.0;         // > 0 overrides the CFL step
  std::int64_t max_steps = 10'000'000;
  double steady_tolerance = 0.0;  // > 0: stop once the steady residual drops below it

  std::array<int, 2> cells{64, 1};
  std::array<double, 2> lower{0.0, 0.0};
  std::array<double, 2> upper{1.0, 1.0};
  std::array<BoundarySpec, 4> boundary{};

  InitialData initial{};
  bool warm_start = true;
  int integration_order = 150;

  // Newton benchmark
  std::uint64_t seed = 20240601;
  double source_min = 0.2;
  double source_max = 1.8;

  // Discrete-velocity oracle grid
  std::array<double, 3> dvm_bound{10.0, 5.0, 5.0};
  std::array<int, 3> dvm_points{80, 20, 20};

  int threads = 0;  // 0: runtime default

  double knudsen(double x) const;
  // Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const SimulationConfig&) const = default;
};

const char* to_string(TimeScheme s);
const char* to_string(Reconstruction r);
const char* to_string(BoundaryKind b);
const char* to_string(KnudsenProfile k);
const char* to_string(InitialKind k);

}  // namespace qbgk
