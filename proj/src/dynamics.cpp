#include "deltaloop/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "deltaloop/errors.hpp"

namespace deltaloop::dynamics {

namespace {

struct LevelPair {
  const rotor::AsymTopLevel* lower;
  const rotor::AsymTopLevel* upper;
  int (*lower_index)(int);
  int (*upper_index)(int);
};

int index_a(int) { return kIndexA; }
int index_b_fn(int m) { return index_b(m); }
int index_c_fn(int m) { return index_c(m); }

void add_coupling(Operator& h, const LevelPair& p, const fields::DriveField& f,
                  const dipole::BodyDipole& d) {
  const cplx gamma = dipole::reduced_matrix_element(*p.upper, *p.lower, d).value;
  const int ju = p.upper->J, jl = p.lower->J;
  for (int ml = -jl; ml <= jl; ++ml)
    for (int sigma = -1; sigma <= 1; ++sigma) {
      const int mu = ml + sigma;
      if (std::abs(mu) > ju) continue;
      const cplx omega = dipole::rabi_from_reduced(gamma, ju, mu, jl, ml, sigma, f.drive(sigma));
      if (omega == cplx(0.0, 0.0)) continue;
      const int r = p.upper_index(mu), c = p.lower_index(ml);
      h(r, c) += 0.5 * omega;
      h(c, r) += 0.5 * std::conj(omega);
    }
}

}  // namespace

Operator assemble_full_hamiltonian(const loop::LoopSpec& spec) {
  const std::array<LevelPair, 3> pairs{{
      {&spec.level_a(), &spec.level_b(), index_a, index_b_fn},
      {&spec.level_b(), &spec.level_c(), index_b_fn, index_c_fn},
      {&spec.level_a(), &spec.level_c(), index_a, index_c_fn},
  }};
  const std::array<double, 3> pair_freq{spec.f_ba(), spec.f_cb(), spec.f_ca()};

  Operator h = Operator::Zero(kDim, kDim);
  for (int which = 1; which <= 3; ++which) {
    const auto& f = spec.field(which);
    int hits = 0;
    const LevelPair* target = nullptr;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (std::abs(f.freq() - pair_freq[k]) < loop::kResonanceToleranceMHz) {
        ++hits;
        target = &pairs[k];
      }
    if (hits > 1)
      throw ResonanceAmbiguity("field " + std::to_string(which) + " at " +
                               std::to_string(f.freq()) +
                               " MHz is resonant with more than one level pair");
    if (target) add_coupling(h, *target, f, spec.dipole());
  }
  return h;
}

State embed_loop_state(const loop::LoopSpec& spec, const Eigen::Vector3cd& amps) {
  const auto d = loop::dressed_states(spec);
  State psi = State::Zero(kDim);
  psi(kIndexA) = amps(0);
  for (int m = 1; m >= -1; --m) {
    psi(index_b(m)) = amps(1) * d.b(1 - m);
    psi(index_c(m)) = amps(2) * d.c(1 - m);
  }
  return psi;
}

Propagator::Propagator(const Operator& h) : eig_(linalg::jacobi_hermitian(h)) {}

State Propagator::evolve(const State& psi0, double t_us) const {
  if (psi0.size() != eig_.values.size())
    throw ValidationError("state dimension does not match the Hamiltonian");
  if (!(std::abs(psi0.norm() - 1.0) <= 1e-9))
    throw ValidationError("initial state must be normalised");
  if (t_us == 0.0) return psi0;
  const Eigen::VectorXcd coeffs = eig_.vectors.adjoint() * psi0;
  Eigen::VectorXcd phased(coeffs.size());
  for (Eigen::Index k = 0; k < coeffs.size(); ++k)
    phased(k) = std::polar(1.0, -2.0 * std::numbers::pi * eig_.values(k) * t_us) * coeffs(k);
  return eig_.vectors * phased;
}

State propagate(const Operator& h, const State& psi0, double t_us) {
  return Propagator(h).evolve(psi0, t_us);
}

namespace {

Populations loop_populations(const loop::DressedStates& d, const State& psi) {
  Populations p;
  p.a = std::norm(psi(kIndexA));
  cplx ob(0, 0), oc(0, 0);
  for (int m = 1; m >= -1; --m) {
    ob += std::conj(d.b(1 - m)) * psi(index_b(m));
    oc += std::conj(d.c(1 - m)) * psi(index_c(m));
  }
  p.b = std::norm(ob);
  p.c = std::norm(oc);
  return p;
}

}  // namespace

std::vector<Populations> population_series(const loop::LoopSpec& spec, const State& psi0,
                                           std::span<const double> t_grid_us) {
  const Propagator prop(assemble_full_hamiltonian(spec));
  const auto d = loop::dressed_states(spec);
  std::vector<Populations> out;
  out.reserve(t_grid_us.size());
  for (double t : t_grid_us) out.push_back(loop_populations(d, prop.evolve(psi0, t)));
  return out;
}

double leakage(const loop::LoopSpec& spec, const Eigen::Vector3cd& psi0_in_loop,
               std::span<const double> t_grid_us) {
  double worst = 0.0;
  for (const auto& p : population_series(spec, embed_loop_state(spec, psi0_in_loop), t_grid_us))
    worst = std::max(worst, p.leak());
  return worst;
}

ContrastPoint enantiomer_contrast(const loop::LoopSpec& spec, double t_us) {
  const std::array<double, 1> t{t_us};
  State psi0 = State::Zero(kDim);
  psi0(kIndexA) = 1.0;
  const auto right = population_series(spec, psi0, t);
  const auto left =
      population_series(spec.with_dipole(dipole::enantiomer(spec.dipole())), psi0, t);
  return {right.front(), left.front()};
}

double max_c_contrast(const loop::LoopSpec& spec, std::span<const double> t_grid_us) {
  State psi0 = State::Zero(kDim);
  psi0(kIndexA) = 1.0;
  const auto right = population_series(spec, psi0, t_grid_us);
  const auto left =
      population_series(spec.with_dipole(dipole::enantiomer(spec.dipole())), psi0, t_grid_us);
  double worst = 0.0;
  for (std::size_t i = 0; i < right.size(); ++i)
    worst = std::max(worst, std::abs(right[i].c - left[i].c));
  return worst;
}

double compare_full_vs_reduced(const loop::LoopSpec& spec, const Eigen::Vector3cd& psi0_in_loop,
                               std::span<const double> t_grid_us) {
  const Propagator full(assemble_full_hamiltonian(spec));
  const Propagator reduced(loop::analyze(spec).rabi.matrix());
  const auto d = loop::dressed_states(spec);
  const State psi0 = embed_loop_state(spec, psi0_in_loop);
  const State chi0 = psi0_in_loop;

  double worst = 0.0;
  for (double t : t_grid_us) {
    const State psi = full.evolve(psi0, t);
    Eigen::Vector3cd projected;
    projected(0) = psi(kIndexA);
    projected(1) = 0.0;
    projected(2) = 0.0;
    for (int m = 1; m >= -1; --m) {
      projected(1) += std::conj(d.b(1 - m)) * psi(index_b(m));
      projected(2) += std::conj(d.c(1 - m)) * psi(index_c(m));
    }
    const State chi = reduced.evolve(chi0, t);
    worst = std::max(worst, (projected - chi).norm());
  }
  return worst;
}

std::vector<int> decoupled_states(const Operator& h) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    bool isolated = true;
    for (Eigen::Index j = 0; j < h.cols() && isolated; ++j)
      if (j != i && (h(i, j) != cplx(0, 0) || h(j, i) != cplx(0, 0))) isolated = false;
    if (isolated) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<double> time_grid(double t0, double t1, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw RangeError("time step must be positive");
  if (!(t1 >= t0) || !std::isfinite(t0) || !std::isfinite(t1))
    throw RangeError("time grid end must not precede its start");
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 0.5));
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = t0 + static_cast<double>(k) * dt;
  return out;
}

}  // namespace deltaloop::dynamics
