#include "deltaloop/molecule.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <optional>

#include "deltaloop/errors.hpp"

namespace deltaloop {

namespace {

constexpr std::string_view kPropanediol =
    "name = propanediol\n"
    "A_MHz = 8572.05\n"
    "B_MHz = 3640.10\n"
    "C_MHz = 2790.96\n"
    "mu_x_D = 1.916\n"
    "mu_y_D = 0.365\n"
    "mu_z_D = 1.201\n";

constexpr std::array<std::string_view, 7> kKeys{"name",   "A_MHz",  "B_MHz", "C_MHz",
                                                "mu_x_D", "mu_y_D", "mu_z_D"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view s, std::string_view key, int line) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(line, "value of '" + std::string(key) + "' is not a number: '" +
                               std::string(s) + "'");
  return v;
}

}  // namespace

MoleculeConfig parse_molecule_config(std::string_view text) {
  std::array<std::optional<std::string>, kKeys.size()> values;
  std::array<int, kKeys.size()> lines{};
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    std::size_t slot = kKeys.size();
    for (std::size_t i = 0; i < kKeys.size(); ++i)
      if (kKeys[i] == key) slot = i;
    if (slot == kKeys.size()) throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    if (values[slot]) throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
    if (value.empty()) throw ParseError(line_no, "empty value for '" + std::string(key) + "'");
    values[slot] = std::string(value);
    lines[slot] = line_no;
  }

  for (std::size_t i = 0; i < kKeys.size(); ++i)
    if (!values[i]) throw ParseError(line_no, "missing key '" + std::string(kKeys[i]) + "'");

  MoleculeConfig m;
  m.name = *values[0];
  std::array<double*, 6> targets{&m.A, &m.B, &m.C, &m.mu_x, &m.mu_y, &m.mu_z};
  for (std::size_t i = 1; i < kKeys.size(); ++i)
    *targets[i - 1] = parse_number(*values[i], kKeys[i], lines[i]);
  (void)m.constants();  // RangeError unless A >= B >= C > 0
  return m;
}

std::string_view bundled_molecule_text(std::string_view name) {
  if (name == "propanediol") return kPropanediol;
  return {};
}

}  // namespace deltaloop
