#include "deltaloop/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "deltaloop/errors.hpp"

namespace deltaloop::linalg {
namespace {

constexpr int kMaxSweeps = 100;

// Rotation angle for the 2x2 block [[app, apq], [apq, aqq]] with apq > 0 real
// or signed. Returns (c, s) such that the rotated off-diagonal vanishes.
std::pair<double, double> jacobi_angle(double app, double aqq, double apq) {
  const double theta = (aqq - app) / (2.0 * apq);
  const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  return {c, t * c};
}

std::vector<int> ascending_order(const Eigen::VectorXd& d) {
  std::vector<int> order(static_cast<std::size_t>(d.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
  return order;
}

template <class Matrix>
double off_norm2(const Matrix& a) {
  double off = 0.0;
  for (Eigen::Index q = 1; q < a.cols(); ++q)
    for (Eigen::Index p = 0; p < q; ++p) off += std::norm(a(p, q));
  return off;
}

}  // namespace

SymmetricEigen jacobi_symmetric(const Eigen::MatrixXd& input) {
  if (input.rows() != input.cols()) throw Error("jacobi_symmetric: matrix not square");
  const Eigen::Index n = input.rows();
  Eigen::MatrixXd a = input;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double scale2 = std::max(a.squaredNorm(), 1e-300);

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    const double off = off_norm2(a);
    if (off == 0.0 || off < 1e-34 * scale2) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const auto [c, s] = jacobi_angle(a(p, p), a(q, q), apq);
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps) throw Error("jacobi_symmetric: no convergence");

  const Eigen::VectorXd d = a.diagonal();
  const auto order = ascending_order(d);
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = d[order[static_cast<std::size_t>(k)]];
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  out.sweeps = sweep;
  return out;
}

HermitianEigen jacobi_hermitian(const Eigen::MatrixXcd& input) {
  if (input.rows() != input.cols()) throw Error("jacobi_hermitian: matrix not square");
  const Eigen::Index n = input.rows();
  Eigen::MatrixXcd a = input;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double scale2 = std::max(a.squaredNorm(), 1e-300);

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    const double off = off_norm2(a);
    if (off == 0.0 || off < 1e-34 * scale2) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const std::complex<double> apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const std::complex<double> phase = std::conj(apq) / mag;  // e^{-i alpha}
        const auto [c, s] = jacobi_angle(a(p, p).real(), a(q, q).real(), mag);
        // G = diag(1, e^{-i alpha}) * R(c, s) restricted to (p, q).
        const std::complex<double> gpp = c, gpq = s, gqp = -s * phase, gqq = c * phase;
        for (Eigen::Index k = 0; k < n; ++k) {
          const auto akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const auto apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const auto vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps) throw Error("jacobi_hermitian: no convergence");

  const Eigen::VectorXd d = a.diagonal().real();
  const auto order = ascending_order(d);
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = d[order[static_cast<std::size_t>(k)]];
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace deltaloop::linalg
