#pragma once

#include <complex>
#include <numbers>

namespace deltaloop {

using cplx = std::complex<double>;

namespace units {

/// 1 Debye in C*m (value used for the propanediol dipole data).
inline constexpr double kDebyeCm = 3.33564e-30;
/// Planck constant, J*s (exact SI value).
inline constexpr double kPlanck = 6.62607015e-34;

/// mu*E/h in MHz for mu = 1 D and E = 1 V/cm:
/// 3.33564e-30 C*m * 100 V/m / 6.62607015e-34 J*s = 0.50341151 MHz.
inline constexpr double kRabiMHzPerDebyeVcm = kDebyeCm * 100.0 / kPlanck * 1e-6;

}  // namespace units
}  // namespace deltaloop
