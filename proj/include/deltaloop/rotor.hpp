#pragma once

#include <vector>

#include <Eigen/Dense>

namespace deltaloop::rotor {

/// Rotational constants in MHz, H_rot/h = A Jz^2 + B Jx^2 + C Jy^2.
/// Construction enforces A >= B >= C > 0; the asymmetric-top labelling is
/// only unambiguous for strict inequalities.
class RotationalConstants {
 public:
  RotationalConstants(double a_mhz, double b_mhz, double c_mhz);

  double A() const noexcept { return a_; }
  double B() const noexcept { return b_; }
  double C() const noexcept { return c_; }
  bool strictly_asymmetric() const noexcept { return a_ > b_ && b_ > c_; }

 private:
  double a_, b_, c_;
};

/// One |J, tau> level. `coeffs[K + J]` is the expansion coefficient on the
/// prolate symmetric-top state |J, K).
struct AsymTopLevel {
  int J = 0;
  int tau = 0;
  double freq = 0.0;  // E/h, MHz
  Eigen::VectorXd coeffs;

  double coeff(int K) const { return coeffs[K + J]; }
};

/// Real symmetric (2J+1)x(2J+1) block of H_rot/h in the |J, K) basis,
/// K = -J..J along rows/columns.
Eigen::MatrixXd rotor_hamiltonian_block(const RotationalConstants& constants, int J);

/// Two eigenvalues closer than this are treated as degenerate for tau
/// labelling.
inline constexpr double kDegeneracyMHz = 1e-6;

/// Levels of the J block sorted by energy with tau = -J..J. Ties (within
/// kDegeneracyMHz) are ordered by the lexicographic order of the
/// phase-fixed eigenvectors; each eigenvector's first nonzero coefficient
/// is positive.
std::vector<AsymTopLevel> rotor_levels(const RotationalConstants& constants, int J);

/// True when two levels of the block are closer than kDegeneracyMHz, i.e.
/// the tau labels depend on the tie-break.
bool has_degenerate_levels(const std::vector<AsymTopLevel>& levels);

/// Convenience lookup: level (J, tau).
AsymTopLevel level(const RotationalConstants& constants, int J, int tau);

/// upper.freq - lower.freq. Throws OrderingError unless strictly positive.
double transition_frequency(const AsymTopLevel& upper, const AsymTopLevel& lower);

}  // namespace deltaloop::rotor
