#include "deltaloop/dipole.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "deltaloop/errors.hpp"
#include "deltaloop/wigner.hpp"

namespace deltaloop::dipole {
namespace {

inline double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

int BodyDipole::chirality() const noexcept {
  const double p = mu_x * mu_y * mu_z;
  return p > 0 ? 1 : (p < 0 ? -1 : 0);
}

SphericalDipole spherical_components(const BodyDipole& d) {
  const double r = std::numbers::sqrt2 / 2.0;
  return {cplx(-d.mu_x * r, d.mu_y * r), cplx(d.mu_z, 0.0), cplx(d.mu_x * r, d.mu_y * r)};
}

BodyDipole enantiomer(const BodyDipole& d) { return {d.mu_x, d.mu_y, -d.mu_z}; }

ReducedElement reduced_matrix_element(const rotor::AsymTopLevel& upper,
                                      const rotor::AsymTopLevel& lower, const BodyDipole& d) {
  ReducedElement out{cplx(0.0, 0.0), {upper.J, upper.tau}, {lower.J, lower.tau}};
  const int ja = upper.J, jb = lower.J;
  if (std::abs(ja - jb) > 1 || (ja == 0 && jb == 0)) return out;

  const SphericalDipole mu = spherical_components(d);
  cplx sum(0.0, 0.0);
  for (int sp = -1; sp <= 1; ++sp) {
    double angular = 0.0;
    for (int kb = -jb; kb <= jb; ++kb) {
      const int ka = kb + sp;  // W vanishes otherwise
      if (std::abs(ka) > ja) continue;
      const double ca = upper.coeff(ka), cb = lower.coeff(kb);
      if (ca == 0.0 || cb == 0.0) continue;
      angular += parity(sp - kb) * ca * cb * wigner::w_coupling(ja, ka, jb, kb, sp);
    }
    if (angular != 0.0) sum += mu[sp] * angular;
  }
  out.value = std::sqrt((2.0 * ja + 1.0) * (2.0 * jb + 1.0)) * sum;
  return out;
}

cplx symtop_reduced_element(int J_a, int K_a, int J_b, int K_b, const BodyDipole& d) {
  if (J_a < 0 || J_b < 0 || std::abs(K_a) > J_a || std::abs(K_b) > J_b)
    throw DomainError("symtop_reduced_element: need |K| <= J");
  const SphericalDipole mu = spherical_components(d);
  cplx sum(0.0, 0.0);
  for (int sp = -1; sp <= 1; ++sp) {
    const double w = wigner::w_coupling(J_a, K_a, J_b, K_b, sp);
    if (w != 0.0) sum += parity(sp - K_b) * w * mu[sp];
  }
  return std::sqrt((2.0 * J_a + 1.0) * (2.0 * J_b + 1.0)) * sum;
}

cplx rabi_from_reduced(cplx gamma, int J_upper, int M_upper, int J_lower, int M_lower, int sigma,
                       cplx drive_v_per_cm) {
  if (M_upper - M_lower != sigma) {
    // Still validate the projections so bad input is not silently zero.
    if (std::abs(M_upper) > J_upper || std::abs(M_lower) > J_lower)
      throw DomainError("rabi_frequency: |M| exceeds J");
    return {0.0, 0.0};
  }
  const double w = wigner::w_coupling(J_upper, M_upper, J_lower, M_lower, sigma);
  if (w == 0.0) return {0.0, 0.0};
  return parity(M_lower + sigma) * units::kRabiMHzPerDebyeVcm * w * drive_v_per_cm * gamma;
}

cplx rabi_frequency(const rotor::AsymTopLevel& upper, int M_upper,
                    const rotor::AsymTopLevel& lower, int M_lower, int sigma,
                    double amplitude_v_per_cm, double phase_rad, const BodyDipole& d) {
  if (amplitude_v_per_cm < 0.0) throw RangeError("rabi_frequency: amplitude must be >= 0");
  if (std::abs(M_upper) > upper.J || std::abs(M_lower) > lower.J)
    throw DomainError("rabi_frequency: |M| exceeds J");
  if (M_upper - M_lower != sigma) return {0.0, 0.0};
  const cplx gamma = reduced_matrix_element(upper, lower, d).value;
  return rabi_from_reduced(gamma, upper.J, M_upper, lower.J, M_lower, sigma,
                           std::polar(amplitude_v_per_cm, phase_rad));
}

}  // namespace deltaloop::dipole
