#include "deltaloop/loop.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <thread>

#include "deltaloop/dynamics.hpp"
#include "deltaloop/errors.hpp"

namespace deltaloop::loop {

// ---------------------------------------------------------------- LoopSpec

Triad parse_triad(std::string_view name) {
  if (name == "a" || name == "A") return Triad::A;
  if (name == "b" || name == "B") return Triad::B;
  if (name == "c" || name == "C") return Triad::C;
  throw ValidationError("unknown triad '" + std::string(name) + "' (expected a, b or c)");
}

char triad_name(Triad t) {
  switch (t) {
    case Triad::A: return 'a';
    case Triad::B: return 'b';
    case Triad::C: return 'c';
  }
  return '?';
}

TriadLevels triad_levels(const rotor::RotationalConstants& k, Triad triad) {
  const auto j1 = rotor::rotor_levels(k, 1);
  const auto ground = rotor::rotor_levels(k, 0).front();
  const auto& low = j1[0];
  const auto& mid = j1[1];
  const auto& high = j1[2];
  switch (triad) {
    case Triad::A: return {ground, low, high};
    case Triad::B: return {ground, low, mid};
    case Triad::C: return {ground, mid, high};
  }
  throw Error("triad_levels: bad triad");
}

LoopSpec::LoopSpec(TriadLevels levels, fields::DriveField field1, fields::DriveField field2,
                   fields::DriveField field3, dipole::BodyDipole dipole)
    : levels_(std::move(levels)),
      fields_{std::move(field1), std::move(field2), std::move(field3)},
      dipole_(dipole) {
  if (levels_.a.J != 0 || levels_.b.J != 1 || levels_.c.J != 1)
    throw ValidationError("loop levels must have J_a = 0 and J_b = J_c = 1");
  if (!(levels_.a.freq < levels_.b.freq && levels_.b.freq < levels_.c.freq))
    throw OrderingError("loop levels must satisfy f_a < f_b < f_c");
  const std::array<double, 3> target{f_ba(), f_cb(), f_ca()};
  for (int i = 0; i < 3; ++i) {
    const double nu = fields_[static_cast<std::size_t>(i)].freq();
    if (!(std::abs(nu - target[static_cast<std::size_t>(i)]) < kResonanceToleranceMHz))
      throw ValidationError("field " + std::to_string(i + 1) + " at " + std::to_string(nu) +
                            " MHz is not resonant with its transition at " +
                            std::to_string(target[static_cast<std::size_t>(i)]) + " MHz");
  }
}

LoopSpec LoopSpec::resonant(const TriadLevels& levels, const fields::DriveField& field1,
                            const fields::DriveField& field2, const fields::DriveField& field3,
                            const dipole::BodyDipole& d) {
  return LoopSpec(levels, field1.with_freq(levels.b.freq - levels.a.freq),
                  field2.with_freq(levels.c.freq - levels.b.freq),
                  field3.with_freq(levels.c.freq - levels.a.freq), d);
}

const fields::DriveField& LoopSpec::field(int which) const {
  if (which < 1 || which > 3) throw DomainError("LoopSpec::field: index must be 1, 2 or 3");
  return fields_[static_cast<std::size_t>(which - 1)];
}

LoopSpec LoopSpec::with_dipole(const dipole::BodyDipole& d) const {
  LoopSpec s = *this;
  s.dipole_ = d;
  return s;
}

LoopSpec LoopSpec::with_field(int which, const fields::DriveField& f) const {
  LoopSpec s = *this;
  auto& slot = s.fields_.at(static_cast<std::size_t>(which - 1));
  slot = f.with_freq(slot.freq());
  return s;
}

std::array<cplx, 3> LoopSpec::reduced_elements() const {
  return {dipole::reduced_matrix_element(levels_.b, levels_.a, dipole_).value,
          dipole::reduced_matrix_element(levels_.c, levels_.b, dipole_).value,
          dipole::reduced_matrix_element(levels_.c, levels_.a, dipole_).value};
}

// ----------------------------------------------------------- dressed states

namespace {

// Direction cosines of a field written without going through acos/atan2,
// so single-component fields give exact zeros.
struct Angles {
  double st, ct, sp, cp;           // sin/cos theta, sin/cos phi
  double ph_plus, ph_zero, ph_minus;
};

Angles angles_of(const fields::DriveField& f) {
  const double e = f.total_amplitude();
  const double ep = f.component(1).amplitude;
  const double e0 = f.component(0).amplitude;
  const double em = f.component(-1).amplitude;
  const double rho = std::hypot(ep, e0);
  Angles a{};
  a.st = rho / e;
  a.ct = em / e;
  a.sp = rho > 0 ? e0 / rho : 0.0;
  a.cp = rho > 0 ? ep / rho : 1.0;
  a.ph_plus = f.component(1).phase;
  a.ph_zero = f.component(0).phase;
  a.ph_minus = f.component(-1).phase;
  return a;
}

cplx eip(double x) { return std::polar(1.0, x); }

}  // namespace

std::array<Eigen::Vector3cd, 3> dressed_triple(const fields::DriveField& f) {
  const Angles g = angles_of(f);
  const cplx up = eip(g.ph_plus), u0 = eip(g.ph_zero), um = eip(g.ph_minus);
  Eigen::Vector3cd s, sp, spp;
  s << g.st * g.cp * up, g.st * g.sp * u0, g.ct * um;
  sp << g.sp * up, -g.cp * u0, cplx(0.0, 0.0);
  spp << g.ct * g.cp * up, g.ct * g.sp * u0, -g.st * um;
  return {s, sp, spp};
}

DressedStates dressed_states(const LoopSpec& spec) {
  const auto b = dressed_triple(spec.field(1));
  const auto c = dressed_triple(spec.field(3));
  return {b[0], b[1], b[2], c[0], c[1], c[2]};
}

// ------------------------------------------------------- closure conditions

double ClosureResiduals::max_abs() const {
  double m = 0.0;
  for (const auto& r : residuals) m = std::max(m, std::abs(r));
  return m;
}

ClosureResiduals closure_conditions(const LoopSpec& spec) {
  using dynamics::index_b;
  using dynamics::index_c;
  const auto h = dynamics::assemble_full_hamiltonian(spec);
  Eigen::Matrix3cd h_cb;
  for (int mc = 1; mc >= -1; --mc)
    for (int mb = 1; mb >= -1; --mb) h_cb(1 - mc, 1 - mb) = h(index_c(mc), index_b(mb));

  const auto d = dressed_states(spec);
  const auto element = [&](const Eigen::Vector3cd& bra, const Eigen::Vector3cd& ket) {
    return bra.dot(h_cb * ket);  // dot() conjugates its left operand
  };
  ClosureResiduals out;
  out.residuals = {element(d.c_prime, d.b), element(d.c_dprime, d.b), element(d.c, d.b_prime),
                   element(d.c, d.b_dprime)};
  out.coupling = element(d.c, d.b);
  return out;
}

ClosureResiduals closure_conditions_closed_form(const LoopSpec& spec) {
  const Angles f1 = angles_of(spec.field(1));
  const Angles f2 = angles_of(spec.field(2));
  const Angles f3 = angles_of(spec.field(3));
  const cplx gamma = spec.reduced_elements()[1];
  const cplx pref = gamma * spec.field(2).total_amplitude() * units::kRabiMHzPerDebyeVcm /
                    (2.0 * std::sqrt(6.0));

  // The six sublevel couplings of field 2, each with its phase factor
  // e^{i(phi_1,x + phi_2,y - phi_3,z)}.
  const cplx e_m_p_0 = eip(f1.ph_minus + f2.ph_plus - f3.ph_zero);
  const cplx e_m_0_m = eip(f1.ph_minus + f2.ph_zero - f3.ph_minus);
  const cplx e_0_p_p = eip(f1.ph_zero + f2.ph_plus - f3.ph_plus);
  const cplx e_0_m_m = eip(f1.ph_zero + f2.ph_minus - f3.ph_minus);
  const cplx e_p_0_p = eip(f1.ph_plus + f2.ph_zero - f3.ph_plus);
  const cplx e_p_m_0 = eip(f1.ph_plus + f2.ph_minus - f3.ph_zero);

  const double st1 = f1.st, ct1 = f1.ct, sp1 = f1.sp, cp1 = f1.cp;
  const double st2 = f2.st, ct2 = f2.ct, sp2 = f2.sp, cp2 = f2.cp;
  const double st3 = f3.st, ct3 = f3.ct, sp3 = f3.sp, cp3 = f3.cp;

  ClosureResiduals out;
  out.coupling = pref * (-ct1 * st2 * cp2 * st3 * sp3 * e_m_p_0
                         - ct1 * st2 * sp2 * ct3 * e_m_0_m
                         - st1 * sp1 * st2 * cp2 * st3 * cp3 * e_0_p_p
                         + st1 * sp1 * ct2 * ct3 * e_0_m_m
                         + st1 * cp1 * st2 * sp2 * st3 * cp3 * e_p_0_p
                         + st1 * cp1 * ct2 * st3 * sp3 * e_p_m_0);
  // <c'|H|b>
  out.residuals[0] = pref * (ct1 * st2 * cp2 * cp3 * e_m_p_0
                             - st1 * sp1 * st2 * cp2 * sp3 * e_0_p_p
                             + st1 * cp1 * st2 * sp2 * sp3 * e_p_0_p
                             - st1 * cp1 * ct2 * cp3 * e_p_m_0);
  // <c''|H|b>
  out.residuals[1] = pref * (-ct1 * st2 * cp2 * ct3 * sp3 * e_m_p_0
                             + ct1 * st2 * sp2 * st3 * e_m_0_m
                             - st1 * sp1 * st2 * cp2 * ct3 * cp3 * e_0_p_p
                             - st1 * sp1 * ct2 * st3 * e_0_m_m
                             + st1 * cp1 * st2 * sp2 * ct3 * cp3 * e_p_0_p
                             + st1 * cp1 * ct2 * ct3 * sp3 * e_p_m_0);
  // <c|H|b'>
  out.residuals[2] = pref * (cp1 * st2 * cp2 * st3 * cp3 * e_0_p_p
                             - cp1 * ct2 * ct3 * e_0_m_m
                             + sp1 * st2 * sp2 * st3 * cp3 * e_p_0_p
                             + sp1 * ct2 * st3 * sp3 * e_p_m_0);
  // <c|H|b''>
  out.residuals[3] = pref * (st1 * st2 * cp2 * st3 * sp3 * e_m_p_0
                             + st1 * st2 * sp2 * ct3 * e_m_0_m
                             - ct1 * sp1 * st2 * cp2 * st3 * cp3 * e_0_p_p
                             + ct1 * sp1 * ct2 * ct3 * e_0_m_m
                             + ct1 * cp1 * st2 * sp2 * st3 * cp3 * e_p_0_p
                             + ct1 * cp1 * ct2 * st3 * sp3 * e_p_m_0);
  return out;
}

// ------------------------------------------------------------- single loop

Eigen::Matrix3cd SingleLoopHamiltonian::matrix() const {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(1, 0) = 0.5 * omega1;
  h(2, 1) = 0.5 * omega2;
  h(2, 0) = 0.5 * omega3;
  h(0, 1) = std::conj(h(1, 0));
  h(1, 2) = std::conj(h(2, 1));
  h(0, 2) = std::conj(h(2, 0));
  return h;
}

std::string to_string(LoopStatus s) {
  switch (s) {
    case LoopStatus::Closed: return "closed";
    case LoopStatus::NotClosed: return "not-closed";
    case LoopStatus::ZeroRabi: return "zero-rabi";
  }
  return "?";
}

LoopAnalysis analyze(const LoopSpec& spec, double tol) {
  LoopAnalysis out;
  out.closure = closure_conditions(spec);
  out.max_residual = out.closure.max_abs();

  const auto gamma = spec.reduced_elements();
  const double cal = units::kRabiMHzPerDebyeVcm;
  const double inv_sqrt3 = 1.0 / std::numbers::sqrt3;
  out.rabi.omega1 = -gamma[0] * spec.field(1).total_amplitude() * cal * inv_sqrt3;
  out.rabi.omega2 = 2.0 * out.closure.coupling;
  out.rabi.omega3 = -gamma[2] * spec.field(3).total_amplitude() * cal * inv_sqrt3;

  if (!(out.max_residual < tol)) {
    out.status = LoopStatus::NotClosed;
    return out;
  }
  const std::array<cplx, 3> om{out.rabi.omega1, out.rabi.omega2, out.rabi.omega3};
  for (int i = 0; i < 3; ++i) {
    if (!(std::abs(om[static_cast<std::size_t>(i)]) > tol)) {
      out.status = LoopStatus::ZeroRabi;
      out.zero_rabi = i + 1;
      return out;
    }
  }
  out.status = LoopStatus::Closed;
  return out;
}

SingleLoopHamiltonian build_single_loop(const LoopSpec& spec, double tol) {
  const auto a = analyze(spec, tol);
  if (a.status == LoopStatus::NotClosed)
    throw NotClosed("configuration is not a closed single loop: max closure residual " +
                        std::to_string(a.max_residual) + " MHz",
                    a.max_residual);
  if (a.status == LoopStatus::ZeroRabi)
    throw ZeroRabi("loop is open: Omega" + std::to_string(a.zero_rabi) + " vanishes",
                   a.zero_rabi);
  return a.rabi;
}

cplx loop_product(const SingleLoopHamiltonian& h) {
  return h.omega1 * h.omega2 * std::conj(h.omega3);
}

// ------------------------------------------------------ pure polarizations

namespace {

// Row order of the published M-level table.
constexpr std::array<std::array<int, 3>, 6> kTableOrder{{
    {1, -1, 0}, {-1, 1, 0}, {0, 1, 1}, {0, -1, -1}, {-1, 0, -1}, {1, 0, 1}}};

int table_rank(const PolarizationRow& r) {
  for (std::size_t i = 0; i < kTableOrder.size(); ++i)
    if (kTableOrder[i] == std::array<int, 3>{r.sigma1, r.sigma2, r.sigma3})
      return static_cast<int>(i);
  return static_cast<int>(kTableOrder.size());
}

}  // namespace

std::vector<PolarizationRow> enumerate_pure_polarizations(const TriadLevels& levels,
                                                          const dipole::BodyDipole& d,
                                                          double tol) {
  std::vector<PolarizationRow> rows;
  rows.reserve(27);
  for (int s1 = -1; s1 <= 1; ++s1)
    for (int s2 = -1; s2 <= 1; ++s2)
      for (int s3 = -1; s3 <= 1; ++s3) {
        const auto spec = LoopSpec::resonant(levels, fields::DriveField::pure(s1, 1.0, 0.0, 0.0),
                                             fields::DriveField::pure(s2, 1.0, 0.0, 0.0),
                                             fields::DriveField::pure(s3, 1.0, 0.0, 0.0), d);
        const auto a = analyze(spec, tol);
        PolarizationRow row;
        row.sigma1 = s1;
        row.sigma2 = s2;
        row.sigma3 = s3;
        row.m_b = s1;  // a single sigma1 component reaches only M_b = sigma1
        row.m_c = s3;
        row.status = a.status;
        row.closed = a.status == LoopStatus::Closed;
        row.abs_omega = {std::abs(a.rabi.omega1), std::abs(a.rabi.omega2),
                         std::abs(a.rabi.omega3)};
        row.max_residual = a.max_residual;
        rows.push_back(row);
      }
  std::stable_sort(rows.begin(), rows.end(), [](const PolarizationRow& x, const PolarizationRow& y) {
    if (x.closed != y.closed) return x.closed;
    return x.closed && table_rank(x) < table_rank(y);
  });
  return rows;
}

// ------------------------------------------------------ linear polarization

LinearVerdict verify_linear_orthogonality(const fields::Vec3& dir1, const fields::Vec3& dir2,
                                          const fields::Vec3& dir3, const TriadLevels& levels,
                                          const dipole::BodyDipole& d, double tol) {
  const auto spec = LoopSpec::resonant(levels, fields::linear_polarization(dir1, 1.0, 0.0, 0.0),
                                       fields::linear_polarization(dir2, 1.0, 0.0, 0.0),
                                       fields::linear_polarization(dir3, 1.0, 0.0, 0.0), d);
  const auto a = analyze(spec, tol);
  return {a.status == LoopStatus::Closed, a.max_residual};
}

namespace {

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
  q.normalize();
  return q.toRotationMatrix();
}

fields::Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  fields::Vec3 v;
  do {
    v = {n01(rng), n01(rng), n01(rng)};
  } while (v.norm() < 1e-6);
  return v.normalized();
}

std::array<fields::Vec3, 3> random_orthogonal_triad(std::mt19937_64& rng) {
  std::array<fields::Vec3, 3> axes{fields::Vec3::UnitZ(), fields::Vec3::UnitX(),
                                   fields::Vec3::UnitY()};
  std::array<int, 3> perm{0, 1, 2};
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin;
  const Eigen::Matrix3d r = random_rotation(rng);
  std::array<fields::Vec3, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    fields::Vec3 v = axes[static_cast<std::size_t>(perm[i])];
    if (coin(rng)) v = -v;
    out[i] = r * v;
  }
  return out;
}

double max_pairwise_dot(const std::array<fields::Vec3, 3>& d) {
  return std::max({std::abs(d[0].dot(d[1])), std::abs(d[0].dot(d[2])), std::abs(d[1].dot(d[2]))});
}

}  // namespace

OrthogonalityReport sample_linear_orthogonality(const TriadLevels& levels,
                                                const dipole::BodyDipole& d, std::size_t samples,
                                                std::uint64_t seed, unsigned threads) {
  std::mt19937_64 rng(seed);
  std::vector<OrthogonalitySample> work(samples);
  std::uniform_real_distribution<double> log_angle(std::log(1e-5), std::log(1e-1));
  std::uniform_int_distribution<int> which(0, 2);
  for (std::size_t i = 0; i < samples; ++i) {
    auto& s = work[i];
    switch (i % 3) {
      case 0: s.dirs = random_orthogonal_triad(rng); break;
      case 1: s.dirs = {random_unit(rng), random_unit(rng), random_unit(rng)}; break;
      default: {
        s.dirs = random_orthogonal_triad(rng);
        const double angle = std::exp(log_angle(rng));
        const fields::Vec3 axis = random_unit(rng);
        auto& v = s.dirs[static_cast<std::size_t>(which(rng))];
        v = Eigen::AngleAxisd(angle, axis) * v;
      }
    }
    s.max_dot = max_pairwise_dot(s.dirs);
    s.orthogonal = s.max_dot < kOrthogonalDot;
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t chunk = (samples + threads - 1) / std::max<std::size_t>(threads, 1);
  std::vector<std::future<void>> jobs;
  for (std::size_t begin = 0; begin < samples; begin += chunk) {
    const std::size_t end = std::min(samples, begin + chunk);
    jobs.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t i = begin; i < end; ++i)
        work[i].verdict = verify_linear_orthogonality(work[i].dirs[0], work[i].dirs[1],
                                                      work[i].dirs[2], levels, d);
    }));
  }
  for (auto& j : jobs) j.get();

  OrthogonalityReport report;
  report.samples = samples;
  for (const auto& s : work) {
    report.orthogonal += s.orthogonal;
    report.closed += s.verdict.closed;
    if (s.verdict.closed) {
      report.max_dot_when_closed = std::max(report.max_dot_when_closed, s.max_dot);
      if (!s.orthogonal) ++report.closed_not_orthogonal;
    } else if (s.orthogonal) {
      ++report.orthogonal_not_closed;
    }
  }
  return report;
}

// ------------------------------------------------------------------ tuning

LoopSpec tune_loop(const LoopSpec& spec, double target_mhz, double loop_phase) {
  if (!(target_mhz > 0.0)) throw RangeError("tune_loop: target Rabi frequency must be positive");
  const auto a = analyze(spec);
  const std::array<cplx, 3> om{a.rabi.omega1, a.rabi.omega2, a.rabi.omega3};
  LoopSpec out = spec;
  for (int i = 0; i < 3; ++i) {
    const double mag = std::abs(om[static_cast<std::size_t>(i)]);
    if (!(mag > kClosureToleranceMHz))
      throw ZeroRabi("tune_loop: Omega" + std::to_string(i + 1) + " vanishes", i + 1);
    out = out.with_field(i + 1, spec.field(i + 1).scaled(target_mhz / mag));
  }
  const double current = std::arg(loop_product(analyze(out).rabi));
  return out.with_field(3, out.field(3).phase_shifted(current - loop_phase));
}

}  // namespace deltaloop::loop
