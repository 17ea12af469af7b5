#include "deltaloop/rotor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "deltaloop/errors.hpp"
#include "deltaloop/jacobi.hpp"

namespace deltaloop::rotor {

RotationalConstants::RotationalConstants(double a_mhz, double b_mhz, double c_mhz)
    : a_(a_mhz), b_(b_mhz), c_(c_mhz) {
  if (!(std::isfinite(a_) && std::isfinite(b_) && std::isfinite(c_)))
    throw RangeError("rotational constants must be finite");
  if (!(c_ > 0.0)) throw RangeError("rotational constant C must be positive");
  if (!(a_ >= b_ && b_ >= c_))
    throw RangeError("rotational constants must satisfy A >= B >= C (got A=" +
                     std::to_string(a_) + ", B=" + std::to_string(b_) +
                     ", C=" + std::to_string(c_) + ")");
}

Eigen::MatrixXd rotor_hamiltonian_block(const RotationalConstants& k, int J) {
  if (J < 0) throw DomainError("rotor_hamiltonian_block: J must be non-negative");
  const int n = 2 * J + 1;
  const double jj = J * (J + 1.0);
  const double bc_mean = 0.5 * (k.B() + k.C());
  const double bc_diff = 0.25 * (k.B() - k.C());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int K = -J; K <= J; ++K) {
    h(K + J, K + J) = k.A() * K * K + bc_mean * (jj - K * K);
    if (K + 2 <= J) {
      // <K+2| (J+^2 + J-^2)/2 |K> scaled by (B - C)/2.
      const double e = bc_diff * std::sqrt(jj - K * (K + 1.0)) *
                       std::sqrt(jj - (K + 1.0) * (K + 2.0));
      h(K + 2 + J, K + J) = e;
      h(K + J, K + 2 + J) = e;
    }
  }
  return h;
}

namespace {

constexpr double kZeroCoeff = 1e-10;

void fix_phase(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > kZeroCoeff) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

bool lexicographic_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

}  // namespace

std::vector<AsymTopLevel> rotor_levels(const RotationalConstants& k, int J) {
  const Eigen::MatrixXd h = rotor_hamiltonian_block(k, J);
  const auto eig = linalg::jacobi_symmetric(h);
  const int n = 2 * J + 1;

  std::vector<AsymTopLevel> levels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& lv = levels[static_cast<std::size_t>(i)];
    lv.J = J;
    lv.freq = eig.values[i];
    lv.coeffs = eig.vectors.col(i);
    fix_phase(lv.coeffs);
  }

  // Values arrive ascending; reorder runs of near-degenerate levels.
  std::size_t start = 0;
  while (start < levels.size()) {
    std::size_t end = start + 1;
    while (end < levels.size() && levels[end].freq - levels[end - 1].freq < kDegeneracyMHz) ++end;
    if (end - start > 1) {
      std::stable_sort(levels.begin() + static_cast<std::ptrdiff_t>(start),
                       levels.begin() + static_cast<std::ptrdiff_t>(end),
                       [](const AsymTopLevel& a, const AsymTopLevel& b) {
                         return lexicographic_less(a.coeffs, b.coeffs);
                       });
    }
    start = end;
  }
  for (int i = 0; i < n; ++i) levels[static_cast<std::size_t>(i)].tau = i - J;
  return levels;
}

bool has_degenerate_levels(const std::vector<AsymTopLevel>& levels) {
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (std::abs(levels[i].freq - levels[i - 1].freq) < kDegeneracyMHz) return true;
  return false;
}

AsymTopLevel level(const RotationalConstants& k, int J, int tau) {
  if (J < 0 || std::abs(tau) > J)
    throw DomainError("level: need J >= 0 and |tau| <= J (J=" + std::to_string(J) +
                      ", tau=" + std::to_string(tau) + ")");
  return rotor_levels(k, J)[static_cast<std::size_t>(tau + J)];
}

double transition_frequency(const AsymTopLevel& upper, const AsymTopLevel& lower) {
  const double f = upper.freq - lower.freq;
  if (!(f > 0.0))
    throw OrderingError("transition_frequency: |" + std::to_string(upper.J) + "," +
                        std::to_string(upper.tau) + "> is not above |" +
                        std::to_string(lower.J) + "," + std::to_string(lower.tau) + ">");
  return f;
}

}  // namespace deltaloop::rotor
