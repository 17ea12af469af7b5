#pragma once

#include <array>

#include <Eigen/Dense>

#include "deltaloop/units.hpp"

namespace deltaloop::fields {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

/// Space-fixed polarization vector eps_sigma: eps_0 = e_Z,
/// eps_{+1} = (e_X + i e_Y)/sqrt2, eps_{-1} = -(e_X - i e_Y)/sqrt2.
CVec3 spherical_unit(int sigma);

struct Component {
  double amplitude = 0.0;  // V/cm, >= 0
  double phase = 0.0;      // rad
};

/// A monochromatic drive E = Re{ sum_sigma eps_sigma E_sigma e^{-i(2 pi nu t + phi_sigma)} }.
/// Amplitudes are stored non-negative; any sign lives in the phase.
class DriveField {
 public:
  DriveField() = default;
  /// Components in the order sigma = -1, 0, +1. Throws RangeError for a
  /// negative amplitude or an all-zero field.
  DriveField(double freq_mhz, std::array<Component, 3> by_sigma);

  static DriveField pure(int sigma, double amplitude, double phase, double freq_mhz);

  double freq() const noexcept { return freq_; }
  const Component& component(int sigma) const { return comp_.at(static_cast<std::size_t>(sigma + 1)); }

  /// E_sigma * exp(+i phi_sigma): the factor that enters the Rabi frequency.
  cplx drive(int sigma) const;

  /// sqrt(sum_sigma E_sigma^2).
  double total_amplitude() const;

  /// Complex polarization vector w with drive(sigma) = eps_sigma . w, so the
  /// real field is Re{ w e^{+i 2 pi nu t} }; for a linear field w = E e^{i phi} n.
  CVec3 polarization_vector() const;

  DriveField with_freq(double freq_mhz) const;
  /// Multiply every drive(sigma) by exp(i*chi).
  DriveField phase_shifted(double chi) const;
  /// Scale every amplitude by `factor` (> 0).
  DriveField scaled(double factor) const;

 private:
  double freq_ = 0.0;
  std::array<Component, 3> comp_{};
};

/// Linearly polarized field along `direction` (normalised internally).
/// Throws ZeroVectorError for a null direction.
DriveField linear_polarization(const Vec3& direction, double amplitude, double phase,
                               double freq_mhz);

/// Field with drive(sigma) = eps_sigma . w for an arbitrary complex
/// polarization vector w (V/cm).
DriveField from_polarization_vector(const CVec3& w, double freq_mhz);

/// Actively rotate the polarization of `f` by the proper rotation `r`.
DriveField rotated(const DriveField& f, const Eigen::Matrix3d& r);

struct PolarizationAngles {
  double theta = 0.0;  // [0, pi/2]
  double phi = 0.0;    // [0, pi/2]
  double phase_plus = 0.0;
  double phase_zero = 0.0;
  double phase_minus = 0.0;
};

/// sin(theta)cos(phi) = E_{+1}/E, sin(theta)sin(phi) = E_0/E, cos(theta) = E_{-1}/E.
PolarizationAngles polarization_angles(const DriveField& f);

}  // namespace deltaloop::fields
