#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldp/potentials.hpp"
#include "ldp/rng.hpp"

namespace ldp {

enum class ProcessKind { Overdamped, Underdamped };

struct DynamicsConfig {
  ProcessKind process = ProcessKind::Overdamped;
  double eta = 0.0;
  std::int64_t steps = 0;              // T
  std::optional<double> radius_guard;  // enables the absorbing bottom state
  double gamma = 0.0;                  // underdamped friction
  double mu = 0.0;                     // underdamped mass-like parameter
  std::uint64_t seed = 0;
};

// One chain snapshot. `t` is the continuous-time index (an exact multiple of
// eta). Once `bottom` is set it stays set for every later state of the same
// trajectory: the step within which the chain moved further than the radius
// guard absorbs the path.
struct ChainState {
  Vector x;
  std::optional<Vector> v;
  double t = 0.0;
  bool bottom = false;
};

struct InitialDistribution {
  enum class Kind { GaussianScaled, StandardGaussian, Point, GaussianWithVelocity };
  Kind kind = Kind::StandardGaussian;
  Vector point;
  double position_var = 1.0;
  double velocity_var = 1.0;

  static InitialDistribution gaussian_scaled();  // N(0, (1/L) I), L from the potential
  static InitialDistribution standard_gaussian();
  static InitialDistribution point_mass(Vector x0);
  static InitialDistribution gaussian_with_velocity(double pos_var, double vel_var);
};

// Immutable once produced; safe to share across threads. Chains own their
// RNG streams and run independently.
struct Trajectory {
  std::vector<ChainState> states;  // steps + 1 entries
  double eta = 0.0;
  bool hit_bottom = false;
};

// Noiseless part of the overdamped update, x - eta grad f(x). Exposed for
// contraction checks.
Vector overdamped_drift(const Potential& p, double eta, const Vector& x);

// x+ = x - eta grad f(x) + N(0, 2 eta I). Requires s.bottom == false.
ChainState overdamped_step(const ChainState& s, const Potential& p, double eta,
                           std::optional<double> radius_guard, RngStream& rng);

// v+ = (1 - gamma eta) v - mu eta grad f(x) + N(0, 2 gamma mu eta I),
// x+ = x + eta v+. Rejects gamma * eta >= 1.
ChainState underdamped_step(const ChainState& s, const Potential& p, double eta,
                            double gamma, double mu, std::optional<double> radius_guard,
                            RngStream& rng);

ChainState sample_initial(const InitialDistribution& init, const Potential& p,
                          bool with_velocity, RngStream& rng);

Trajectory run_chain(const Potential& p, const DynamicsConfig& cfg,
                     const InitialDistribution& init, RngStream& rng);

// Same walk without storing the intermediate states.
ChainState run_chain_final(const Potential& p, const DynamicsConfig& cfg,
                           const InitialDistribution& init, RngStream& rng);

// Coupled pair of overdamped chains at step sizes eta and eta/k driven by one
// shared Brownian increment stream (the eta-chain consumes sums of k fine
// increments). The gradient gap is sup over substeps of
// |grad f(x at j eta/k) - grad f(x at floor(j/k) eta)| along each chain's own
// path; by smoothness it stays below L r on paths that respect the guard.
struct CoupledOutcome {
  Vector coarse_end;
  Vector fine_end;
  double coarse_max_step_displacement = 0.0;
  double fine_max_step_displacement = 0.0;
  double max_gradient_gap_coarse = 0.0;
  double max_gradient_gap_fine = 0.0;
  bool coarse_bottom = false;
  bool fine_bottom = false;
};

CoupledOutcome coupled_refinement_run(const Potential& p, double eta, int k,
                                      std::int64_t T, std::optional<double> radius_guard,
                                      const InitialDistribution& init, RngStream& rng);

// Columns: step,t,x1..xd[,v1..vd],bottom
std::string trajectory_to_csv(const Trajectory& traj);
void write_trajectory_binary(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_binary(const std::string& path);

}  // namespace ldp
