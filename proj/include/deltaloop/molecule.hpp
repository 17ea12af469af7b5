#pragma once

#include <string>
#include <string_view>

#include "deltaloop/dipole.hpp"
#include "deltaloop/rotor.hpp"

namespace deltaloop {

struct MoleculeConfig {
  std::string name;
  double A = 0.0, B = 0.0, C = 0.0;           // MHz
  double mu_x = 0.0, mu_y = 0.0, mu_z = 0.0;  // Debye, signed

  rotor::RotationalConstants constants() const { return {A, B, C}; }
  dipole::BodyDipole dipole() const { return {mu_x, mu_y, mu_z}; }
};

/// Line-based `key = value` text with `#` comments. Required keys, each
/// exactly once: name, A_MHz, B_MHz, C_MHz, mu_x_D, mu_y_D, mu_z_D.
/// Throws ParseError (with line number) for malformed lines, unknown,
/// duplicate or missing keys, and RangeError unless A >= B >= C > 0.
MoleculeConfig parse_molecule_config(std::string_view text);

/// The propanediol data compiled into the library.
std::string_view bundled_molecule_text(std::string_view name);

}  // namespace deltaloop
