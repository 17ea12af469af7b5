#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "deltaloop/dynamics.hpp"
#include "deltaloop/errors.hpp"
#include "oracles.hpp"

using namespace deltaloop;
using namespace deltaloop::dynamics;
using fields::DriveField;
using fields::Vec3;
using loop::LoopSpec;

namespace {

const rotor::RotationalConstants kK(8572.05, 3640.10, 2790.96);
const dipole::BodyDipole kMu{1.916, 0.365, 1.201};
const loop::TriadLevels kA = loop::triad_levels(kK, loop::Triad::A);

LoopSpec circ(double amp = 1.0) {
  return LoopSpec::resonant(kA, DriveField::pure(1, amp, 0, 0), DriveField::pure(-1, amp, 0, 0),
                            DriveField::pure(0, amp, 0, 0), kMu);
}

LoopSpec linear(const Vec3& d2, double scale = 1.0) {
  return LoopSpec::resonant(kA, fields::linear_polarization(Vec3::UnitZ(), scale, 0, 0),
                            fields::linear_polarization(d2, 0.75 * scale, 0, 0),
                            fields::linear_polarization(Vec3::UnitY(), 2.75 * scale, 0, 0), kMu);
}

LoopSpec zxy(double scale = 1.0) { return linear(Vec3::UnitX(), scale); }

LoopSpec tilted(double deg, double scale = 1.0) {
  const double r = deg * std::numbers::pi / 180.0;
  return linear(Vec3(std::cos(r), std::sin(r), 0.0), scale);
}

State basis(int i) {
  State s = State::Zero(kDim);
  s(i) = 1.0;
  return s;
}

// Columns: a, b, b', b'', c, c', c'' in the bare sublevel basis.
Eigen::MatrixXcd dressed_frame(const LoopSpec& spec) {
  const auto d = loop::dressed_states(spec);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(kDim, kDim);
  u(kIndexA, 0) = 1.0;
  const std::array<const Eigen::Vector3cd*, 6> cols{&d.b, &d.b_prime, &d.b_dprime, &d.c, &d.c_prime, &d.c_dprime};
  for (int k = 0; k < 6; ++k)
    for (int m = 1; m >= -1; --m)
      u(k < 3 ? index_b(m) : index_c(m), k + 1) = (*cols[static_cast<std::size_t>(k)])(1 - m);
  return u;
}

}  // namespace

TEST_CASE("basis ordering") {
  CHECK(index_b(1) == 1);
  CHECK(index_b(-1) == 3);
  CHECK(index_c(1) == 4);
  CHECK(index_c(-1) == 6);
}

TEST_CASE("circular configuration couples exactly the expected sublevels") {
  const auto h = assemble_full_hamiltonian(circ());
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
  std::set<std::pair<int, int>> nonzero;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < i; ++j)
      if (h(i, j) != cplx(0, 0)) nonzero.insert({i, j});
  const std::set<std::pair<int, int>> expected{{index_b(1), kIndexA},
                                               {index_c(0), index_b(1)},
                                               {index_c(-1), index_b(0)},
                                               {index_c(0), kIndexA}};
  CHECK(nonzero == expected);
  CHECK(decoupled_states(h) == std::vector<int>{index_b(-1), index_c(1)});
  CHECK(h.diagonal().norm() == 0.0);
}

TEST_CASE("restriction to the dressed loop equals the single-loop Hamiltonian") {
  for (const auto& spec : {circ(), zxy(), zxy(3.0)}) {
    const Eigen::MatrixXcd u = dressed_frame(spec);
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(kDim, kDim)).norm() < 1e-14);
    const Eigen::MatrixXcd hd = u.adjoint() * assemble_full_hamiltonian(spec) * u;
    const Eigen::Matrix3cd sl = loop::build_single_loop(spec).matrix();
    const std::array<int, 3> loop_idx{0, 1, 4};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(hd(loop_idx[i], loop_idx[j]) - sl(i, j)));
    CHECK(worst < 1e-12);
    // And nothing connects the loop to the rest.
    for (int i : loop_idx)
      for (int j : {2, 3, 5, 6}) CHECK(std::abs(hd(i, j)) < 1e-15);
  }
}

TEST_CASE("a field resonant with two level pairs is ambiguous") {
  const rotor::RotationalConstants k(4.0, 2.0, 1.0);  // f_ba = f_cb = 3 MHz
  const auto lv = loop::triad_levels(k, loop::Triad::A);
  const auto f = DriveField::pure(0, 1.0, 0.0, 0.0);
  const auto spec = LoopSpec::resonant(lv, f, f, f, kMu);
  CHECK_THROWS_AS(assemble_full_hamiltonian(spec), ResonanceAmbiguity);
}

TEST_CASE("propagation basics") {
  const auto h = assemble_full_hamiltonian(zxy());
  const Propagator p(h);
  const State psi0 = basis(kIndexA);
  CHECK(p.evolve(psi0, 0.0) == psi0);
  CHECK_THROWS_AS(p.evolve(2.0 * psi0, 1.0), ValidationError);

  std::mt19937_64 rng(61);
  std::normal_distribution<double> n;
  for (int i = 0; i < 20; ++i) {
    State s(kDim);
    for (int k = 0; k < kDim; ++k) s(k) = {n(rng), n(rng)};
    s.normalize();
    const double t1 = std::abs(n(rng)), t2 = std::abs(n(rng));
    const State a = p.evolve(s, t1 + t2);
    const State b = p.evolve(p.evolve(s, t1).normalized(), t2);
    CHECK((a - b).norm() < 1e-12);
    CHECK(std::abs(a.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("two-level Rabi flopping") {
  Operator h = Operator::Zero(2, 2);
  const cplx omega = std::polar(1.0, 0.7);  // |Omega| = 1 MHz
  h(1, 0) = 0.5 * omega;
  h(0, 1) = 0.5 * std::conj(omega);
  State g = State::Zero(2);
  g(0) = 1.0;
  const Propagator p(h);
  CHECK(std::norm(p.evolve(g, 0.5)(1)) == doctest::Approx(1.0).epsilon(1e-12));
  double worst = 0.0;
  for (double t : time_grid(0.0, 3.0, 0.01)) {
    const double pu = std::norm(p.evolve(g, t)(1));
    const double s = std::sin(std::numbers::pi * std::abs(omega) * t);
    worst = std::max(worst, std::abs(pu - s * s));
  }
  CHECK(worst < 1e-10);

  // The same inside the seven-level space with only field 1 acting.
  const auto spec = circ();
  Operator h7 = assemble_full_hamiltonian(spec);
  const cplx o1 = 2.0 * h7(index_b(1), kIndexA);
  h7.setZero();
  h7(index_b(1), kIndexA) = 0.5 * o1;
  h7(kIndexA, index_b(1)) = 0.5 * std::conj(o1);
  const Propagator p7(h7);
  worst = 0.0;
  for (double t : time_grid(0.0, 5.0, 0.05)) {
    const double s = std::sin(std::numbers::pi * std::abs(o1) * t);
    worst = std::max(worst, std::abs(std::norm(p7.evolve(basis(kIndexA), t)(index_b(1))) - s * s));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("eigendecomposition propagation matches independent integrators") {
  std::mt19937_64 rng(62);
  std::normal_distribution<double> n;
  for (const auto& spec : {circ(), zxy(), tilted(17.0, 2.0)}) {
    const auto h = assemble_full_hamiltonian(spec);
    State s(kDim);
    for (int k = 0; k < kDim; ++k) s(k) = {n(rng), n(rng)};
    s.normalize();
    const double t = 1.3;
    const State got = propagate(h, s, t);
    CHECK((got - oracle::rk4(h, s, t, 4000)).norm() < 1e-10);
    const Eigen::MatrixXcd u = oracle::expm(cplx(0, -2.0 * std::numbers::pi * t) * h);
    CHECK((got - u * s).norm() < 1e-12);
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(kDim, kDim)).norm() < 1e-12);
  }
}

TEST_CASE("closed loops do not leak") {
  const auto grid = time_grid(0.0, 2.0, 0.01);
  for (const auto& spec : {circ(5.0), zxy(5.0)}) {
    CHECK(leakage(spec, {1, 0, 0}, grid) <= 1e-10);
    CHECK(leakage(spec, Eigen::Vector3cd(1, cplx(0, 1), -1).normalized(), grid) <= 1e-10);
    CHECK(compare_full_vs_reduced(spec, {1, 0, 0}, grid) <= 1e-10);
  }
  // A decoupled sublevel stays outside the loop.
  const auto spec = circ();
  for (const auto& p : population_series(spec, basis(index_c(1)), grid)) {
    CHECK(p.a == 0.0);
    CHECK(p.b == 0.0);
    CHECK(p.c == 0.0);
  }
}

TEST_CASE("open configurations leak") {
  const auto long_grid = time_grid(0.0, 10.0, 0.05);
  const auto zxx = LoopSpec::resonant(kA, fields::linear_polarization(Vec3::UnitZ(), 1, 0, 0),
                                      fields::linear_polarization(Vec3::UnitX(), 1, 0, 0),
                                      fields::linear_polarization(Vec3::UnitX(), 1, 0, 0), kMu);
  CHECK(leakage(zxx, {1, 0, 0}, long_grid) > 1e-3);
  const auto grid = time_grid(0.0, 2.0, 0.01);
  CHECK(leakage(tilted(5.0, 5.0), {1, 0, 0}, grid) > 1e-4);
  CHECK(compare_full_vs_reduced(tilted(5.0, 5.0), {1, 0, 0}, grid) > 1e-4);
}

TEST_CASE("bare-basis evolution agrees with the dressed-basis Hamiltonian") {
  for (const auto& spec : {zxy(2.0), tilted(20.0, 2.0)}) {
    const Eigen::MatrixXcd u = dressed_frame(spec);
    const auto h = assemble_full_hamiltonian(spec);
    const Operator hd = u.adjoint() * h * u;
    const State psi0 = basis(kIndexA);
    for (double t : {0.1, 0.7, 1.9}) {
      const State bare = u.adjoint() * propagate(h, psi0, t);
      const State dressed = propagate(hd, u.adjoint() * psi0, t);
      CHECK((bare - dressed).norm() < 1e-12);
    }
  }
}

TEST_CASE("populations depend only on Rabi magnitudes and the loop phase") {
  const auto spec = loop::tune_loop(zxy(), 1.0, 0.9);
  const auto grid = time_grid(0.0, 1.5, 0.05);
  const auto ref = population_series(spec, basis(kIndexA), grid);
  const auto compare = [&](const LoopSpec& s) {
    double worst = 0.0;
    const auto got = population_series(s, basis(kIndexA), grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max({worst, std::abs(got[i].a - ref[i].a), std::abs(got[i].b - ref[i].b),
                        std::abs(got[i].c - ref[i].c)});
    return worst;
  };
  // Rephasing that keeps the loop phase: chi3 = chi1 + chi2.
  const double c1 = 0.4, c2 = -1.3;
  const auto gauge = spec.with_field(1, spec.field(1).phase_shifted(c1))
                         .with_field(2, spec.field(2).phase_shifted(c2))
                         .with_field(3, spec.field(3).phase_shifted(c1 + c2));
  CHECK(compare(gauge) < 1e-12);
  // A common shift of all three changes the loop phase, and the populations.
  const auto common = spec.with_field(1, spec.field(1).phase_shifted(1.0))
                          .with_field(2, spec.field(2).phase_shifted(1.0))
                          .with_field(3, spec.field(3).phase_shifted(1.0));
  CHECK(compare(common) > 1e-3);
}

TEST_CASE("enantiomer contrast") {
  const auto spec = zxy();
  const auto t0 = enantiomer_contrast(spec, 0.0);
  CHECK(t0.right.a == 1.0);
  CHECK(t0.left.a == 1.0);
  CHECK(t0.right.c == 0.0);

  const auto tuned = loop::tune_loop(spec, 1.0, std::numbers::pi / 2);
  const auto period = time_grid(0.0, 1.0, 0.005);
  CHECK(max_c_contrast(tuned, period) > 0.1);

  // Loop phases 0 and pi (the two hands) evolve identically.
  CHECK(max_c_contrast(loop::tune_loop(spec, 1.0, 0.0), period) < 1e-12);

  // Without field 2 there is no loop and no contrast.
  const auto without_field2 = [&](const dipole::BodyDipole& d) {
    Operator h = assemble_full_hamiltonian(tuned.with_dipole(d));
    h.block(4, 1, 3, 3).setZero();
    h.block(1, 4, 3, 3).setZero();
    return h;
  };
  const Propagator pr(without_field2(kMu)), pl(without_field2(dipole::enantiomer(kMu)));
  for (double t : period)
    CHECK(std::abs(std::norm(pr.evolve(basis(kIndexA), t)(index_c(0))) -
                   std::norm(pl.evolve(basis(kIndexA), t)(index_c(0)))) < 1e-12);
}

TEST_CASE("time grids") {
  const auto g = time_grid(0.0, 2.0, 0.01);
  CHECK(g.size() == 201);
  CHECK(g.back() == doctest::Approx(2.0));
  CHECK(time_grid(1.0, 1.0, 0.5) == std::vector<double>{1.0});
  CHECK_THROWS_AS(time_grid(0.0, 1.0, 0.0), RangeError);
  CHECK_THROWS_AS(time_grid(1.0, 0.0, 0.1), RangeError);
}
