#pragma once

#include <array>
#include <string_view>

#include "deltaloop/dipole.hpp"
#include "deltaloop/fields.hpp"
#include "deltaloop/rotor.hpp"

namespace deltaloop::loop {

/// Resonance window used to decide which level pair a field addresses.
inline constexpr double kResonanceToleranceMHz = 1e-3;

/// The three ground-state anchored (J, tau) triads
///   A: |0,0> -> |1,-1> -> |1,1>,  B: |0,0> -> |1,-1> -> |1,0>,
///   C: |0,0> -> |1,0> -> |1,1>.
enum class Triad { A, B, C };

Triad parse_triad(std::string_view name);
char triad_name(Triad t);

struct TriadLevels {
  rotor::AsymTopLevel a, b, c;
};

TriadLevels triad_levels(const rotor::RotationalConstants& constants, Triad triad);

/// Levels a, b, c (J_a = 0, J_b = J_c = 1, f_a < f_b < f_c), the three drive
/// fields (1: a<->b, 2: b<->c, 3: a<->c) and the body-frame dipole.
/// Construction validates the level structure and that every field is
/// within kResonanceToleranceMHz of its transition.
class LoopSpec {
 public:
  LoopSpec(TriadLevels levels, fields::DriveField field1, fields::DriveField field2,
           fields::DriveField field3, dipole::BodyDipole dipole);

  /// Same, with each field's frequency set to its transition frequency.
  static LoopSpec resonant(const TriadLevels& levels, const fields::DriveField& field1,
                           const fields::DriveField& field2, const fields::DriveField& field3,
                           const dipole::BodyDipole& dipole);

  const rotor::AsymTopLevel& level_a() const noexcept { return levels_.a; }
  const rotor::AsymTopLevel& level_b() const noexcept { return levels_.b; }
  const rotor::AsymTopLevel& level_c() const noexcept { return levels_.c; }
  const TriadLevels& levels() const noexcept { return levels_; }
  const fields::DriveField& field(int which) const;
  const dipole::BodyDipole& dipole() const noexcept { return dipole_; }

  double f_ba() const noexcept { return levels_.b.freq - levels_.a.freq; }
  double f_cb() const noexcept { return levels_.c.freq - levels_.b.freq; }
  double f_ca() const noexcept { return levels_.c.freq - levels_.a.freq; }

  LoopSpec with_dipole(const dipole::BodyDipole& d) const;
  /// Replace field `which` (1..3); the frequency of the replacement is kept.
  LoopSpec with_field(int which, const fields::DriveField& f) const;

  /// Reduced elements Gamma(b<-a), Gamma(c<-b), Gamma(c<-a), Debye.
  std::array<cplx, 3> reduced_elements() const;

 private:
  TriadLevels levels_;
  std::array<fields::DriveField, 3> fields_;
  dipole::BodyDipole dipole_;
};

}  // namespace deltaloop::loop
