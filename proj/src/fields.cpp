#include "deltaloop/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "deltaloop/errors.hpp"

namespace deltaloop::fields {

CVec3 spherical_unit(int sigma) {
  const double r = std::numbers::sqrt2 / 2.0;
  switch (sigma) {
    case 1: return {cplx(r, 0), cplx(0, r), cplx(0, 0)};
    case 0: return {cplx(0, 0), cplx(0, 0), cplx(1, 0)};
    case -1: return {cplx(-r, 0), cplx(0, r), cplx(0, 0)};
    default: throw DomainError("spherical_unit: sigma must be -1, 0 or +1");
  }
}

DriveField::DriveField(double freq_mhz, std::array<Component, 3> by_sigma)
    : freq_(freq_mhz), comp_(by_sigma) {
  bool any = false;
  for (const auto& c : comp_) {
    if (!(c.amplitude >= 0.0) || !std::isfinite(c.amplitude) || !std::isfinite(c.phase))
      throw RangeError("drive field amplitudes must be finite and non-negative");
    any = any || c.amplitude > 0.0;
  }
  if (!any) throw RangeError("drive field has no nonzero component");
}

DriveField DriveField::pure(int sigma, double amplitude, double phase, double freq_mhz) {
  if (sigma < -1 || sigma > 1) throw DomainError("pure field: sigma must be -1, 0 or +1");
  std::array<Component, 3> c{};
  c[static_cast<std::size_t>(sigma + 1)] = {amplitude, phase};
  return DriveField(freq_mhz, c);
}

cplx DriveField::drive(int sigma) const {
  const auto& c = component(sigma);
  return std::polar(c.amplitude, c.phase);
}

double DriveField::total_amplitude() const {
  double s = 0.0;
  for (const auto& c : comp_) s += c.amplitude * c.amplitude;
  return std::sqrt(s);
}

CVec3 DriveField::polarization_vector() const {
  CVec3 w = CVec3::Zero();
  for (int s = -1; s <= 1; ++s) w += drive(s) * spherical_unit(s).conjugate();
  return w;
}

DriveField DriveField::with_freq(double freq_mhz) const {
  DriveField f = *this;
  f.freq_ = freq_mhz;
  return f;
}

DriveField DriveField::phase_shifted(double chi) const {
  DriveField f = *this;
  for (auto& c : f.comp_) c.phase += chi;
  return f;
}

DriveField DriveField::scaled(double factor) const {
  if (!(factor > 0.0)) throw RangeError("field scale factor must be positive");
  DriveField f = *this;
  for (auto& c : f.comp_) c.amplitude *= factor;
  return f;
}

DriveField from_polarization_vector(const CVec3& w, double freq_mhz) {
  std::array<Component, 3> c{};
  for (int s = -1; s <= 1; ++s) {
    // eps_sigma . w without conjugation.
    const cplx a = spherical_unit(s).transpose() * w;
    c[static_cast<std::size_t>(s + 1)] = {std::abs(a), a == cplx(0, 0) ? 0.0 : std::arg(a)};
  }
  return DriveField(freq_mhz, c);
}

DriveField linear_polarization(const Vec3& direction, double amplitude, double phase,
                               double freq_mhz) {
  const double norm = direction.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw ZeroVectorError("linear_polarization: direction must be a nonzero finite vector");
  if (!(amplitude > 0.0)) throw RangeError("linear_polarization: amplitude must be positive");
  const CVec3 w = (direction / norm).cast<cplx>() * std::polar(amplitude, phase);
  return from_polarization_vector(w, freq_mhz);
}

DriveField rotated(const DriveField& f, const Eigen::Matrix3d& r) {
  return from_polarization_vector(r.cast<cplx>() * f.polarization_vector(), f.freq());
}

PolarizationAngles polarization_angles(const DriveField& f) {
  const double e = f.total_amplitude();
  const double ep = f.component(1).amplitude;
  const double e0 = f.component(0).amplitude;
  const double em = f.component(-1).amplitude;
  PolarizationAngles out;
  out.theta = std::acos(std::clamp(em / e, 0.0, 1.0));
  out.phi = std::atan2(e0, ep);
  out.phase_plus = f.component(1).phase;
  out.phase_zero = f.component(0).phase;
  out.phase_minus = f.component(-1).phase;
  return out;
}

}  // namespace deltaloop::fields
