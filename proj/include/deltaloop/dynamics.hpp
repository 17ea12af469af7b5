#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "deltaloop/jacobi.hpp"
#include "deltaloop/loop.hpp"

namespace deltaloop::dynamics {

/// Sublevel basis, fixed order:
///   0: |a> = |0,0,0>
///   1..3: |1,tau_b,M> for M = +1, 0, -1
///   4..6: |1,tau_c,M> for M = +1, 0, -1
inline constexpr int kDim = 7;
inline constexpr int kIndexA = 0;
constexpr int index_b(int m) { return 1 + (1 - m); }
constexpr int index_c(int m) { return 4 + (1 - m); }

using Operator = Eigen::MatrixXcd;
using State = Eigen::VectorXcd;

/// RWA interaction-picture Hamiltonian (MHz) on the 7 sublevels. Each field
/// couples every sublevel pair of the level pair it is resonant with, for
/// every polarization component. Throws ResonanceAmbiguity if a field sits
/// within the resonance window of more than one level pair.
Operator assemble_full_hamiltonian(const loop::LoopSpec& spec);

/// Embeds a vector over the dressed loop states (a, b, c) into the 7-level space.
State embed_loop_state(const loop::LoopSpec& spec, const Eigen::Vector3cd& loop_amplitudes);

/// exp(-i 2 pi H t) by eigendecomposition, t in microseconds.
class Propagator {
 public:
  explicit Propagator(const Operator& h);

  /// Throws ValidationError unless ||psi0|| = 1 within 1e-9.
  State evolve(const State& psi0, double t_us) const;
  const linalg::HermitianEigen& eigen() const noexcept { return eig_; }

 private:
  linalg::HermitianEigen eig_;
};

State propagate(const Operator& h, const State& psi0, double t_us);

/// Max over the grid of 1 - sum_{s in a,b,c} |<s|psi(t)>|^2 with psi(0) built
/// from `psi0_in_loop` over (a, b, c).
double leakage(const loop::LoopSpec& spec, const Eigen::Vector3cd& psi0_in_loop,
               std::span<const double> t_grid_us);

struct Populations {
  double a = 0.0, b = 0.0, c = 0.0;
  double leak() const { return 1.0 - a - b - c; }
};

/// Dressed-state populations of psi(t) on the grid.
std::vector<Populations> population_series(const loop::LoopSpec& spec, const State& psi0,
                                           std::span<const double> t_grid_us);

struct ContrastPoint {
  Populations right;  // the spec's dipole
  Populations left;   // its enantiomer
};

/// Evolve |a> with the spec's dipole and with its mirror image under the
/// same fields, and return both populations over (a, b, c) at time t.
ContrastPoint enantiomer_contrast(const loop::LoopSpec& spec, double t_us);

/// max_t |P_c^R(t) - P_c^L(t)| over the grid.
double max_c_contrast(const loop::LoopSpec& spec, std::span<const double> t_grid_us);

/// max over the grid of || P_loop psi_full(t) - psi_sl(t) || where psi_full
/// evolves under the 7-level Hamiltonian and psi_sl under the 3-level H_sl
/// built from the same Rabi frequencies (closure not required).
double compare_full_vs_reduced(const loop::LoopSpec& spec, const Eigen::Vector3cd& psi0_in_loop,
                               std::span<const double> t_grid_us);

/// Indices of basis states with no coupling to anything.
std::vector<int> decoupled_states(const Operator& h);

/// Uniform grid t0, t0+dt, ..., up to and including t1 (within dt/2).
std::vector<double> time_grid(double t0, double t1, double dt);

}  // namespace deltaloop::dynamics
