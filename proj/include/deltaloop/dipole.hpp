#pragma once

#include "deltaloop/rotor.hpp"
#include "deltaloop/units.hpp"

namespace deltaloop::dipole {

/// Permanent dipole along the principal axes, Debye (signed).
struct BodyDipole {
  double mu_x = 0.0;
  double mu_y = 0.0;
  double mu_z = 0.0;

  /// Sign of mu_x*mu_y*mu_z; 0 when any component vanishes.
  int chirality() const noexcept;
  bool operator==(const BodyDipole&) const = default;
};

/// Molecule-frame spherical components mu_{-1}, mu_0, mu_{+1}.
struct SphericalDipole {
  cplx minus;
  cplx zero;
  cplx plus;

  cplx operator[](int sigma) const { return sigma < 0 ? minus : (sigma == 0 ? zero : plus); }
};

SphericalDipole spherical_components(const BodyDipole& d);

/// Mirror image: mu_z -> -mu_z.
BodyDipole enantiomer(const BodyDipole& d);

struct LevelLabel {
  int J = 0;
  int tau = 0;
  bool operator==(const LevelLabel&) const = default;
};

struct ReducedElement {
  cplx value;  // Debye
  LevelLabel upper;
  LevelLabel lower;
};

/// Gamma_{upper, lower}: the M- and polarization-independent dipole factor,
/// summed over the symmetric-top components of both levels. Exactly 0 for
/// |J_upper - J_lower| > 1.
ReducedElement reduced_matrix_element(const rotor::AsymTopLevel& upper,
                                      const rotor::AsymTopLevel& lower, const BodyDipole& d);

/// Gamma for pure symmetric-top states |J_a, K_a) <- |J_b, K_b).
cplx symtop_reduced_element(int J_a, int K_a, int J_b, int K_b, const BodyDipole& d);

/// Rabi frequency in MHz for a given reduced element and complex drive
/// amplitude E_sigma*exp(i*phi_sigma) in V/cm:
///   (-1)^(M_lower + sigma) * drive * CAL * W^(sigma)_{J_u M_u, J_l M_l} * Gamma.
/// Exactly 0 when M_upper - M_lower != sigma.
cplx rabi_from_reduced(cplx gamma, int J_upper, int M_upper, int J_lower, int M_lower, int sigma,
                       cplx drive_v_per_cm);

cplx rabi_frequency(const rotor::AsymTopLevel& upper, int M_upper,
                    const rotor::AsymTopLevel& lower, int M_lower, int sigma,
                    double amplitude_v_per_cm, double phase_rad, const BodyDipole& d);

}  // namespace deltaloop::dipole
