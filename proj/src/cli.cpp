#include "deltaloop/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "deltaloop/dynamics.hpp"
#include "deltaloop/errors.hpp"
#include "deltaloop/loop.hpp"
#include "deltaloop/molecule.hpp"

namespace deltaloop::cli {

namespace {

// ------------------------------------------------------------------ parsing

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v))
    throw ValidationError(fmt::format("{}: '{}' is not a number", what, s));
  return v;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw ValidationError(fmt::format("{}: '{}' is not an integer", what, s));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

std::array<double, 3> parse_triple(std::string_view s, std::string_view what) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw ValidationError(fmt::format("{} needs three comma-separated values", what));
  return {parse_double(parts[0], what), parse_double(parts[1], what), parse_double(parts[2], what)};
}

// Values that would print as "-0.000..." at the given precision print as 0.
double tidy(double x, int digits) {
  return std::abs(x) < 0.5 * std::pow(10.0, -digits) ? 0.0 : x;
}

// Angle in (-pi, pi], with values within rounding of -pi reported as +pi.
double wrap_phase(double x) {
  return x <= -std::numbers::pi + 1e-9 ? x + 2.0 * std::numbers::pi : x;
}

// Residuals below floating noise print as zero so tables are stable across platforms.
double tidy_residual(double x) { return x < 1e-15 ? 0.0 : x; }

MoleculeConfig load_molecule(const std::string& name_or_path) {
  if (std::filesystem::is_regular_file(name_or_path)) {
    std::ifstream in(name_or_path);
    std::stringstream buf;
    buf << in.rdbuf();
    if (!in && !in.eof()) throw ValidationError("cannot read " + name_or_path);
    return parse_molecule_config(buf.str());
  }
  const auto bundled = bundled_molecule_text(name_or_path);
  if (bundled.empty())
    throw ValidationError("'" + name_or_path + "' is neither a readable file nor a bundled molecule");
  return parse_molecule_config(bundled);
}

class CsvFile {
 public:
  explicit CsvFile(const std::string& path) : out_(path) {
    if (!out_) throw ValidationError("cannot open " + path + " for writing");
  }
  void line(const std::string& s) { out_ << s << '\n'; }

 private:
  std::ofstream out_;
};

std::optional<CsvFile> open_csv(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return std::optional<CsvFile>(std::in_place, path);
}

// ------------------------------------------------------- loop configuration

struct LoopOptions {
  std::string triad = "a";
  std::string pol;
  std::string sigma;
  std::vector<std::string> fields;
  std::string amp;
  std::string config;
  double tilt2_deg = 0.0;
};

void add_loop_options(CLI::App* app, LoopOptions& o, bool with_config) {
  app->add_option("--triad", o.triad, "Level triad: a, b or c")->capture_default_str();
  app->add_option("--pol", o.pol, "Linear polarizations of fields 1-3, e.g. ZXY");
  app->add_option("--sigma", o.sigma, "Pure spherical components of fields 1-3, e.g. 1,-1,0");
  app->add_option("--field", o.fields,
                  "General field (give three times, in order): sigma:amp:phase terms joined by '+'");
  app->add_option("--amp", o.amp, "Amplitudes of fields 1-3 in V/cm, e.g. 1,0.75,2.75");
  app->add_option("--tilt2", o.tilt2_deg, "Rotate field 2 about Z by this angle (degrees)");
  if (with_config)
    app->add_option("--config", o.config, "Preset loop: circular (sigma 1,-1,0) or linear (ZXY)");
}

struct BuiltLoop {
  loop::LoopSpec spec;
  std::string label;
  std::array<std::string, 3> column;  // per-field label for CSV rows
  bool pure = false;
  std::array<int, 3> sigma{};
};

fields::Vec3 axis_of(char c) {
  switch (c) {
    case 'X': case 'x': return fields::Vec3::UnitX();
    case 'Y': case 'y': return fields::Vec3::UnitY();
    case 'Z': case 'z': return fields::Vec3::UnitZ();
    default: throw ValidationError(fmt::format("--pol: '{}' is not one of X, Y, Z", c));
  }
}

fields::DriveField parse_field(std::string_view text) {
  std::array<fields::Component, 3> comp{};
  std::array<bool, 3> seen{};
  for (auto term : split(text, '+')) {
    const auto parts = split(term, ':');
    if (parts.size() != 3)
      throw ValidationError(fmt::format("--field: '{}' is not sigma:amp:phase", term));
    const int s = parse_int(parts[0], "--field sigma");
    if (s < -1 || s > 1) throw DomainError("--field: sigma must be -1, 0 or 1");
    const auto k = static_cast<std::size_t>(s + 1);
    if (seen[k]) throw ValidationError(fmt::format("--field: sigma {} given twice", s));
    seen[k] = true;
    comp[k] = {parse_double(parts[1], "--field amplitude"), parse_double(parts[2], "--field phase")};
  }
  return fields::DriveField(0.0, comp);
}

BuiltLoop build_loop(const MoleculeConfig& mol, LoopOptions o) {
  const bool amp_given = !o.amp.empty();
  if (!o.config.empty()) {
    if (!o.pol.empty() || !o.sigma.empty() || !o.fields.empty())
      throw ValidationError("--config cannot be combined with --pol, --sigma or --field");
    if (o.config == "circular") {
      o.sigma = "1,-1,0";
    } else if (o.config == "linear") {
      o.pol = "ZXY";
      if (!amp_given) o.amp = "1,0.75,2.75";
    } else {
      throw ValidationError("--config must be circular or linear");
    }
  }
  const int chosen = !o.pol.empty() + !o.sigma.empty() + !o.fields.empty();
  if (chosen != 1) throw ValidationError("give exactly one of --pol, --sigma, --field or --config");

  std::array<double, 3> amp{1.0, 1.0, 1.0};
  if (!o.amp.empty()) amp = parse_triple(o.amp, "--amp");
  for (double a : amp)
    if (!(a > 0.0)) throw RangeError("--amp values must be positive");

  struct {
    std::string label;
    std::array<std::string, 3> column;
    bool pure = false;
    std::array<int, 3> sigma{};
  } out;
  std::array<fields::DriveField, 3> f;
  if (!o.pol.empty()) {
    if (o.pol.size() != 3) throw ValidationError("--pol needs three letters, e.g. ZXY");
    for (std::size_t i = 0; i < 3; ++i) {
      f[i] = fields::linear_polarization(axis_of(o.pol[i]), amp[i], 0.0, 0.0);
      out.column[i] = std::string(1, static_cast<char>(std::toupper(o.pol[i])));
    }
    out.label = "linear " + out.column[0] + out.column[1] + out.column[2];
  } else if (!o.sigma.empty()) {
    const auto parts = split(o.sigma, ',');
    if (parts.size() != 3) throw ValidationError("--sigma needs three comma-separated values");
    for (std::size_t i = 0; i < 3; ++i) {
      out.sigma[i] = parse_int(parts[i], "--sigma");
      f[i] = fields::DriveField::pure(out.sigma[i], amp[i], 0.0, 0.0);
      out.column[i] = std::to_string(out.sigma[i]);
    }
    out.pure = true;
    out.label = fmt::format("sigma ({},{},{})", out.sigma[0], out.sigma[1], out.sigma[2]);
  } else {
    if (o.fields.size() != 3) throw ValidationError("--field must be given exactly three times");
    for (std::size_t i = 0; i < 3; ++i) {
      f[i] = parse_field(o.fields[i]).scaled(amp[i]);
      out.column[i] = "field";
    }
    out.label = "general fields";
  }
  if (o.tilt2_deg != 0.0) {
    const Eigen::Matrix3d r =
        Eigen::AngleAxisd(o.tilt2_deg * std::numbers::pi / 180.0, fields::Vec3::UnitZ())
            .toRotationMatrix();
    f[1] = fields::rotated(f[1], r);
    out.label += fmt::format(", field 2 tilted {} deg", o.tilt2_deg);
    out.pure = false;
  }
  const auto levels = loop::triad_levels(mol.constants(), loop::parse_triad(o.triad));
  return {loop::LoopSpec::resonant(levels, f[0], f[1], f[2], mol.dipole()), out.label, out.column,
          out.pure, out.sigma};
}

std::string level_name(const rotor::AsymTopLevel& l) { return fmt::format("|{},{}>", l.J, l.tau); }

// --------------------------------------------------------------- commands

void cmd_levels(const MoleculeConfig& mol, int jmax, const std::string& csv_path, std::ostream& out) {
  if (jmax < 0) throw RangeError("--jmax must be >= 0");
  auto csv = open_csv(csv_path);
  if (csv) csv->line("J,tau,freq_MHz,K,coeff");
  out << fmt::format("{}: A={:.2f} B={:.2f} C={:.2f} MHz\n", mol.name, mol.A, mol.B, mol.C);
  out << fmt::format("{:>3} {:>4} {:>12}  coefficients on |J,K), K = -J..J\n", "J", "tau", "freq_MHz");
  const auto k = mol.constants();
  for (int j = 0; j <= jmax; ++j) {
    for (const auto& l : rotor::rotor_levels(k, j)) {
      std::string coeffs;
      for (int kk = -j; kk <= j; ++kk) {
        coeffs += fmt::format(" {:+.6f}", tidy(l.coeff(kk), 6));
        if (csv) csv->line(fmt::format("{},{},{:.2f},{},{:.6f}", j, l.tau, l.freq, kk, tidy(l.coeff(kk), 6)));
      }
      out << fmt::format("{:>3} {:>4} {:>12.2f} {}\n", j, l.tau, l.freq, coeffs);
    }
  }
}

void cmd_transitions(const MoleculeConfig& mol, const std::string& triad, const std::string& csv_path,
                     std::ostream& out) {
  const auto t = loop::parse_triad(triad);
  const auto lv = loop::triad_levels(mol.constants(), t);
  const auto d = mol.dipole();
  struct Row {
    const char* name;
    const rotor::AsymTopLevel* upper;
    const rotor::AsymTopLevel* lower;
    double norm;
  };
  const std::array<Row, 3> rows{{{"nu1", &lv.b, &lv.a, std::sqrt(3.0)},
                                 {"nu2", &lv.c, &lv.b, std::sqrt(6.0)},
                                 {"nu3", &lv.c, &lv.a, std::sqrt(3.0)}}};
  auto csv = open_csv(csv_path);
  if (csv) csv->line("field,J_upper,tau_upper,J_lower,tau_lower,freq_MHz,abs_gamma_D,scaled_gamma_D");
  out << fmt::format("{} triad {}\n", mol.name, loop::triad_name(t));
  out << fmt::format("{:<5} {:<16} {:>10} {:>9} {:>12}\n", "field", "transition", "freq_MHz",
                     "|Gamma|_D", "|Gamma|/n_D");
  for (const auto& r : rows) {
    const double freq = rotor::transition_frequency(*r.upper, *r.lower);
    const double g = std::abs(dipole::reduced_matrix_element(*r.upper, *r.lower, d).value);
    out << fmt::format("{:<5} {:<16} {:>10.2f} {:>9.3f} {:>12.3f}\n", r.name,
                       level_name(*r.upper) + " <- " + level_name(*r.lower), freq, g, g / r.norm);
    if (csv)
      csv->line(fmt::format("{},{},{},{},{},{:.2f},{:.3f},{:.3f}", r.name, r.upper->J, r.upper->tau,
                            r.lower->J, r.lower->tau, freq, g, g / r.norm));
  }
  out << "n = sqrt(3) for nu1 and nu3, sqrt(6) for nu2\n";
}

constexpr const char* kLoopsCsvHeader = "sigma1,sigma2,sigma3,Mb,Mc,closed,|O1|,|O2|,|O3|,residual_max";

void cmd_enumerate(const MoleculeConfig& mol, const std::string& triad, bool all,
                   const std::string& csv_path, std::ostream& out) {
  const auto t = loop::parse_triad(triad);
  const auto rows = loop::enumerate_pure_polarizations(loop::triad_levels(mol.constants(), t), mol.dipole());
  auto csv = open_csv(csv_path);
  if (csv) csv->line(kLoopsCsvHeader);
  out << fmt::format("{} triad {}: pure-polarization triples{}\n", mol.name, loop::triad_name(t),
                     all ? "" : " forming a closed loop");
  out << fmt::format("{:>6} {:>6} {:>6} {:>3} {:>3} {:>10} {:>8} {:>8} {:>8} {:>12}\n", "sigma1",
                     "sigma2", "sigma3", "Mb", "Mc", "status", "|O1|", "|O2|", "|O3|", "residual_max");
  int closed = 0;
  for (const auto& r : rows) {
    closed += r.closed;
    if (!all && !r.closed) continue;
    out << fmt::format("{:>6} {:>6} {:>6} {:>3} {:>3} {:>10} {:>8.4f} {:>8.4f} {:>8.4f} {:>12.1e}\n",
                       r.sigma1, r.sigma2, r.sigma3, r.m_b, r.m_c, loop::to_string(r.status),
                       r.abs_omega[0], r.abs_omega[1], r.abs_omega[2], tidy_residual(r.max_residual));
    if (csv)
      csv->line(fmt::format("{},{},{},{},{},{},{:.4f},{:.4f},{:.4f},{:.1e}", r.sigma1, r.sigma2,
                            r.sigma3, r.m_b, r.m_c, r.closed ? 1 : 0, r.abs_omega[0],
                            r.abs_omega[1], r.abs_omega[2], tidy_residual(r.max_residual)));
  }
  out << fmt::format("{} of {} triples close (|O| in MHz at 1 V/cm)\n", closed, rows.size());
}

void cmd_verify(const MoleculeConfig& mol, const LoopOptions& o, double tol, const std::string& csv_path,
                std::ostream& out) {
  const auto built = build_loop(mol, o);
  const auto a = loop::analyze(built.spec, tol);
  const auto& s = built.spec;
  out << fmt::format("{} triad {}, {}\n", mol.name, o.triad, built.label);
  out << fmt::format("field amplitudes (V/cm): {:.2f} {:.2f} {:.2f}\n", s.field(1).total_amplitude(),
                     s.field(2).total_amplitude(), s.field(3).total_amplitude());
  static constexpr std::array<const char*, 4> names{"<c'|H|b>", "<c''|H|b>", "<c|H|b'>", "<c|H|b''>"};
  out << "closure residuals (MHz)\n";
  for (std::size_t i = 0; i < 4; ++i)
    out << fmt::format("  {:<10} {:.1e}\n", names[i], tidy_residual(std::abs(a.closure.residuals[i])));
  out << fmt::format("status: {}", loop::to_string(a.status));
  if (a.status == loop::LoopStatus::ZeroRabi) out << fmt::format(" (Omega{} = 0)", a.zero_rabi);
  out << '\n';

  const std::array<cplx, 3> om{a.rabi.omega1, a.rabi.omega2, a.rabi.omega3};
  out << fmt::format("{:<7} {:>10} {:>9}\n", "", "|O|_MHz", "arg_rad");
  for (std::size_t i = 0; i < 3; ++i)
    out << fmt::format("Omega{}  {:>10.4f} {:>9.4f}\n", i + 1, std::abs(om[i]), tidy(wrap_phase(std::arg(om[i])), 4));
  if (std::abs(om[0]) > 0.0)
    out << fmt::format("ratio   1 : {:.2f} : {:.2f}\n", std::abs(om[1]) / std::abs(om[0]),
                       std::abs(om[2]) / std::abs(om[0]));
  if (a.status == loop::LoopStatus::Closed)
    out << fmt::format("loop phase arg(O1 O2 O3*) = {:.4f} rad\n", tidy(wrap_phase(std::arg(loop::loop_product(a.rabi))), 4));

  if (auto csv = open_csv(csv_path)) {
    csv->line(kLoopsCsvHeader);
    const auto m = [&](int v) { return built.pure ? std::to_string(v) : std::string("-"); };
    csv->line(fmt::format("{},{},{},{},{},{},{:.4f},{:.4f},{:.4f},{:.1e}", built.column[0],
                          built.column[1], built.column[2], m(built.sigma[0]), m(built.sigma[2]),
                          a.status == loop::LoopStatus::Closed ? 1 : 0, std::abs(om[0]),
                          std::abs(om[1]), std::abs(om[2]), tidy_residual(a.max_residual)));
  }
}

int cmd_orthogonality(const MoleculeConfig& mol, const std::string& triad, std::size_t samples,
                      std::uint64_t seed, unsigned threads, const std::string& csv_path, std::ostream& out) {
  if (samples == 0) throw RangeError("--samples must be positive");
  const auto t = loop::parse_triad(triad);
  const auto r = loop::sample_linear_orthogonality(loop::triad_levels(mol.constants(), t),
                                                   mol.dipole(), samples, seed, threads);
  out << fmt::format("{} triad {}: linear polarizations, seed {}\n", mol.name, loop::triad_name(t), seed);
  out << fmt::format("{:<28} {}\n", "samples", r.samples);
  out << fmt::format("{:<28} {}\n", "orthogonal (|dot| < 1e-8)", r.orthogonal);
  out << fmt::format("{:<28} {}\n", "closed", r.closed);
  out << fmt::format("{:<28} {}\n", "closed but not orthogonal", r.closed_not_orthogonal);
  out << fmt::format("{:<28} {}\n", "orthogonal but not closed", r.orthogonal_not_closed);
  out << fmt::format("{:<28} {:.1e}\n", "max |dot| over closed", r.max_dot_when_closed);
  out << fmt::format("closure <=> orthogonality: {}\n", r.theorem_holds() ? "holds" : "VIOLATED");
  if (auto csv = open_csv(csv_path)) {
    csv->line("samples,orthogonal,closed,closed_not_orthogonal,orthogonal_not_closed,max_dot_closed");
    csv->line(fmt::format("{},{},{},{},{},{:.1e}", r.samples, r.orthogonal, r.closed,
                          r.closed_not_orthogonal, r.orthogonal_not_closed, r.max_dot_when_closed));
  }
  return r.theorem_holds() ? kOk : kInternalError;
}

dynamics::State initial_state(const loop::LoopSpec& spec, const std::string& psi0) {
  if (psi0 == "a") return dynamics::embed_loop_state(spec, {1, 0, 0});
  if (psi0 == "b") return dynamics::embed_loop_state(spec, {0, 1, 0});
  if (psi0 == "c") return dynamics::embed_loop_state(spec, {0, 0, 1});
  const auto parts = split(psi0, ':');
  if (parts.size() == 2 && (parts[0] == "b" || parts[0] == "c")) {
    const int m = parse_int(parts[1], "--psi0 M");
    if (m < -1 || m > 1) throw DomainError("--psi0: M must be -1, 0 or 1");
    dynamics::State s = dynamics::State::Zero(dynamics::kDim);
    s(parts[0] == "b" ? dynamics::index_b(m) : dynamics::index_c(m)) = 1.0;
    return s;
  }
  throw ValidationError("--psi0 must be a, b, c, b:M or c:M");
}

void cmd_simulate(const MoleculeConfig& mol, const LoopOptions& o, double t_end, double dt,
                  const std::string& psi0_name, const std::string& csv_path, std::ostream& out) {
  const auto built = build_loop(mol, o);
  const auto a = loop::analyze(built.spec);
  const auto grid = dynamics::time_grid(0.0, t_end, dt);
  const auto series =
      dynamics::population_series(built.spec, initial_state(built.spec, psi0_name), grid);

  out << fmt::format("{} triad {}, {}; loop {}; psi0 = {}\n", mol.name, o.triad, built.label,
                     loop::to_string(a.status), psi0_name);
  out << fmt::format("{:>8} {:>12} {:>12} {:>12} {:>10}\n", "t_us", "P_a", "P_b", "P_c", "leakage");
  auto csv = open_csv(csv_path);
  if (csv) csv->line("t_us,P_a,P_b,P_c,leakage");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = series[i];
    const double leak = std::max(0.0, p.leak());
    worst = std::max(worst, leak);
    out << fmt::format("{:>8.4f} {:>12.8f} {:>12.8f} {:>12.8f} {:>10.2e}\n", grid[i], p.a, p.b, p.c, leak);
    if (csv) csv->line(fmt::format("{:.4f},{:.8f},{:.8f},{:.8f},{:.2e}", grid[i], p.a, p.b, p.c, leak));
  }
  out << fmt::format("max leakage {:.2e}\n", worst);
}

void cmd_contrast(const MoleculeConfig& mol, const LoopOptions& o, double target, double loop_phase,
                  double periods, double dt, const std::string& csv_path, std::ostream& out) {
  if (!(periods > 0.0)) throw RangeError("--periods must be positive");
  const auto built = build_loop(mol, o);
  loop::build_single_loop(built.spec);  // NotClosed / ZeroRabi surface as validation errors
  const auto tuned = loop::tune_loop(built.spec, target, loop_phase);
  const auto right = loop::build_single_loop(tuned);
  const auto left = loop::build_single_loop(tuned.with_dipole(dipole::enantiomer(tuned.dipole())));

  const double period = 1.0 / target;
  const auto grid = dynamics::time_grid(0.0, periods * period, dt);
  dynamics::State psi0 = dynamics::State::Zero(dynamics::kDim);
  psi0(dynamics::kIndexA) = 1.0;
  const auto pr = dynamics::population_series(tuned, psi0, grid);
  const auto pl =
      dynamics::population_series(tuned.with_dipole(dipole::enantiomer(tuned.dipole())), psi0, grid);

  out << fmt::format("{} triad {}, {}; |O| = {:.4f} MHz, Rabi period {:.4f} us\n", mol.name, o.triad,
                     built.label, target, period);
  out << fmt::format("loop phase: R {:+.4f} rad, L {:+.4f} rad\n", tidy(wrap_phase(std::arg(loop::loop_product(right))), 4),
                     tidy(wrap_phase(std::arg(loop::loop_product(left))), 4));
  out << fmt::format("{:>8} {:>10} {:>10} {:>10}\n", "t_us", "P_c^R", "P_c^L", "dP_c");
  auto csv = open_csv(csv_path);
  if (csv) csv->line("t_us,P_a_R,P_b_R,P_c_R,P_a_L,P_b_L,P_c_L,dP_c");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double diff = pr[i].c - pl[i].c;
    worst = std::max(worst, std::abs(diff));
    out << fmt::format("{:>8.4f} {:>10.6f} {:>10.6f} {:>+10.6f}\n", grid[i], pr[i].c, pl[i].c, diff);
    if (csv)
      csv->line(fmt::format("{:.4f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}", grid[i], pr[i].a,
                            pr[i].b, pr[i].c, pl[i].a, pl[i].b, pl[i].c, diff));
  }
  out << fmt::format("max |P_c^R - P_c^L| = {:.6f}\n", worst);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotational levels, loop closure checks and sublevel dynamics for asymmetric tops",
               "loops"};
  app.require_subcommand(1);

  std::string mol_name, csv_path;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("molecule", mol_name, "Bundled molecule name or path to a config file")->required();
    sub->add_option("--csv", csv_path, "Also write the table as CSV to this path");
  };

  int jmax = 2;
  auto* levels = app.add_subcommand("levels", "Asymmetric-top energies and coefficients");
  add_common(levels);
  levels->add_option("--jmax", jmax, "Highest J")->capture_default_str();

  std::string triad = "a";
  auto* transitions = app.add_subcommand("transitions", "Triad transition frequencies and dipoles");
  add_common(transitions);
  transitions->add_option("--triad", triad, "Level triad: a, b or c")->capture_default_str();

  auto* loops = app.add_subcommand("loops", "Loop enumeration and verification");
  loops->require_subcommand(1);

  bool all = false;
  auto* enumerate = loops->add_subcommand("enumerate", "Closed pure-polarization triples");
  add_common(enumerate);
  enumerate->add_option("--triad", triad, "Level triad: a, b or c")->capture_default_str();
  enumerate->add_flag("--all", all, "Also list the rejected triples");

  LoopOptions lo;
  double tol = loop::kClosureToleranceMHz;
  auto* verify = loops->add_subcommand("verify", "Closure residuals and Rabi frequencies");
  add_common(verify);
  add_loop_options(verify, lo, true);
  verify->add_option("--tol", tol, "Closure tolerance, MHz")->capture_default_str();

  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  auto* ortho = loops->add_subcommand("orthogonality", "Sampled check: closure <=> orthogonal linear fields");
  add_common(ortho);
  ortho->add_option("--triad", triad, "Level triad: a, b or c")->capture_default_str();
  ortho->add_option("--samples", samples)->capture_default_str();
  ortho->add_option("--seed", seed)->capture_default_str();
  ortho->add_option("--threads", threads, "Worker threads (0: hardware concurrency)");

  double t_end = 2.0, dt = 0.01;
  std::string psi0 = "a";
  auto* simulate = app.add_subcommand("simulate", "Population dynamics on the seven sublevels");
  add_common(simulate);
  add_loop_options(simulate, lo, true);
  simulate->add_option("--t", t_end, "End time, us")->capture_default_str();
  simulate->add_option("--dt", dt, "Time step, us")->capture_default_str();
  simulate->add_option("--psi0", psi0, "Initial state: a, b, c, b:M or c:M")->capture_default_str();

  double target = 1.0, loop_phase = std::numbers::pi / 2, periods = 1.0, dt_c = 0.005;
  auto* contrast = app.add_subcommand("contrast", "Enantiomer population contrast");
  add_common(contrast);
  add_loop_options(contrast, lo, true);
  contrast->add_option("--target", target, "Common |Omega|, MHz")->capture_default_str();
  contrast->add_option("--loop-phase", loop_phase, "Loop phase of the given dipole, rad")->capture_default_str();
  contrast->add_option("--periods", periods, "Duration in Rabi periods")->capture_default_str();
  contrast->add_option("--dt", dt_c, "Time step, us")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  try {
    const auto mol = load_molecule(mol_name);
    if (*levels) {
      cmd_levels(mol, jmax, csv_path, out);
    } else if (*transitions) {
      cmd_transitions(mol, triad, csv_path, out);
    } else if (*enumerate) {
      cmd_enumerate(mol, triad, all, csv_path, out);
    } else if (*verify) {
      cmd_verify(mol, lo, tol, csv_path, out);
    } else if (*ortho) {
      return cmd_orthogonality(mol, triad, samples, seed, threads, csv_path, out);
    } else if (*simulate) {
      cmd_simulate(mol, lo, t_end, dt, psi0, csv_path, out);
    } else if (*contrast) {
      cmd_contrast(mol, lo, target, loop_phase, periods, dt_c, csv_path, out);
    }
  } catch (const ParseError& e) {
    err << "error: " << mol_name << ": " << e.what() << '\n';
    return kValidationError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace deltaloop::cli
