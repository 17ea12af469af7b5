#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "deltaloop/loop_spec.hpp"

namespace deltaloop::loop {

/// Default closure tolerance on residuals and minimum |Omega|, MHz.
inline constexpr double kClosureToleranceMHz = 1e-9;

/// Amplitude vectors over M = (+1, 0, -1) of the J = 1 level each state
/// belongs to. {b, b', b''} and {c, c', c''} are orthonormal.
struct DressedStates {
  Eigen::Vector3cd b, b_prime, b_dprime;
  Eigen::Vector3cd c, c_prime, c_dprime;
};

/// Unit amplitude triple (b, b', b'') built from a single field.
std::array<Eigen::Vector3cd, 3> dressed_triple(const fields::DriveField& f);

DressedStates dressed_states(const LoopSpec& spec);

/// The four matrix elements that must vanish, in the order
/// <c'|H|b>, <c''|H|b>, <c|H|b'>, <c|H|b''>, together with <c|H|b> (= Omega2/2).
struct ClosureResiduals {
  std::array<cplx, 4> residuals;
  cplx coupling;
  double max_abs() const;
};

/// Residuals contracted from the assembled 7-level Hamiltonian.
ClosureResiduals closure_conditions(const LoopSpec& spec);

/// Same quantities from the closed-form trigonometric expressions in the
/// angles (theta, phi) and phases of the three fields. Independent of the
/// Hamiltonian assembly; used as its cross-check.
ClosureResiduals closure_conditions_closed_form(const LoopSpec& spec);

struct SingleLoopHamiltonian {
  cplx omega1, omega2, omega3;  // MHz

  /// 3x3 H_sl over (a, b, c):  (Omega1|b><a| + Omega2|c><b| + Omega3|c><a| + h.c.)/2.
  Eigen::Matrix3cd matrix() const;
};

enum class LoopStatus { Closed, NotClosed, ZeroRabi };
std::string to_string(LoopStatus s);

struct LoopAnalysis {
  ClosureResiduals closure;
  SingleLoopHamiltonian rabi;  // filled whether or not the loop closes
  double max_residual = 0.0;
  LoopStatus status = LoopStatus::NotClosed;
  int zero_rabi = 0;           // which Omega vanished, for ZeroRabi
};

/// Closure residuals, Rabi frequencies and verdict without throwing.
LoopAnalysis analyze(const LoopSpec& spec, double tol = kClosureToleranceMHz);

/// Omega1 = -Gamma(b<-a) E1 CAL/sqrt3, Omega3 = -Gamma(c<-a) E3 CAL/sqrt3,
/// Omega2 = 2<c|H2|b>. Throws NotClosed if any residual >= tol, then ZeroRabi
/// if any |Omega| <= tol.
SingleLoopHamiltonian build_single_loop(const LoopSpec& spec, double tol = kClosureToleranceMHz);

/// Omega1*Omega2*conj(Omega3): invariant under rephasing of |a>, |b>, |c>.
cplx loop_product(const SingleLoopHamiltonian& h);

struct PolarizationRow {
  int sigma1 = 0, sigma2 = 0, sigma3 = 0;
  int m_b = 0, m_c = 0;
  bool closed = false;
  LoopStatus status = LoopStatus::NotClosed;
  std::array<double, 3> abs_omega{};  // MHz
  double max_residual = 0.0;
};

/// All 27 single-component polarization triples, unit amplitudes and zero
/// phases. Closed rows come first in the canonical table order, followed
/// by the rejected rows in lexicographic (sigma1, sigma2, sigma3) order.
std::vector<PolarizationRow> enumerate_pure_polarizations(const TriadLevels& levels,
                                                          const dipole::BodyDipole& d,
                                                          double tol = kClosureToleranceMHz);

struct LinearVerdict {
  bool closed = false;
  double max_residual = 0.0;
};

/// Three linear fields (1 V/cm, zero phase, resonant) along the given
/// directions: closure residuals plus nonzero-Rabi check.
LinearVerdict verify_linear_orthogonality(const fields::Vec3& dir1, const fields::Vec3& dir2,
                                          const fields::Vec3& dir3, const TriadLevels& levels,
                                          const dipole::BodyDipole& d,
                                          double tol = kClosureToleranceMHz);

inline constexpr double kOrthogonalDot = 1e-8;

struct OrthogonalitySample {
  std::array<fields::Vec3, 3> dirs;
  bool orthogonal = false;  // max pairwise |dot| < kOrthogonalDot
  double max_dot = 0.0;
  LinearVerdict verdict;
};

struct OrthogonalityReport {
  std::size_t samples = 0;
  std::size_t orthogonal = 0;
  std::size_t closed = 0;
  std::size_t closed_not_orthogonal = 0;
  std::size_t orthogonal_not_closed = 0;
  double max_dot_when_closed = 0.0;
  bool theorem_holds() const { return closed_not_orthogonal == 0 && orthogonal_not_closed == 0; }
};

/// Sampled check of "closure <=> mutually orthogonal linear polarizations".
/// A third of the samples are random rotations of signed permutations of
/// (X, Y, Z), a third are uniformly random direction triads, and a third
/// are orthogonal triads perturbed by a small random rotation of one
/// direction. Samples are drawn sequentially from `seed`, evaluated on
/// `threads` workers and reduced in sample order.
OrthogonalityReport sample_linear_orthogonality(const TriadLevels& levels,
                                                const dipole::BodyDipole& d, std::size_t samples,
                                                std::uint64_t seed, unsigned threads = 0);

/// Rescale the three field amplitudes so every |Omega| equals
/// `target_mhz`, and rephase field 3 so arg(Omega1 Omega2 conj(Omega3)) is
/// `loop_phase`. The spec must have nonzero Omegas.
LoopSpec tune_loop(const LoopSpec& spec, double target_mhz, double loop_phase);

}  // namespace deltaloop::loop
