#include "deltaloop/wigner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "deltaloop/errors.hpp"

namespace deltaloop::wigner {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_args(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (j1 < 0 || j2 < 0 || j3 < 0)
    throw DomainError("wigner3j: negative angular momentum");
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3)
    throw DomainError("wigner3j: projection exceeds angular momentum (" + std::to_string(j1) +
                      " " + std::to_string(j2) + " " + std::to_string(j3) + "; " +
                      std::to_string(m1) + " " + std::to_string(m2) + " " +
                      std::to_string(m3) + ")");
}

double racah(int j1, int j2, int j3, int m1, int m2, int m3) {
  // Triangle coefficient and projection factorials, squared and exact.
  cpp_int num = factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3);
  num *= factorial(j1 + m1) * factorial(j1 - m1) * factorial(j2 + m2) * factorial(j2 - m2) *
         factorial(j3 + m3) * factorial(j3 - m3);
  cpp_int den = factorial(j1 + j2 + j3 + 1);

  const int kmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int kmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  cpp_rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    cpp_int d = factorial(k) * factorial(j3 - j2 + k + m1) * factorial(j3 - j1 + k - m2) *
                factorial(j1 + j2 - j3 - k) * factorial(j1 - k - m1) * factorial(j2 - k + m2);
    cpp_rational term(cpp_int(1), d);
    if (k % 2) sum -= term; else sum += term;
  }
  if (sum == 0) return 0.0;

  const cpp_int s_num = boost::multiprecision::numerator(sum);
  const cpp_int s_den = boost::multiprecision::denominator(sum);
  const cpp_rational squared(num * s_num * s_num, den * s_den * s_den);
  double magnitude = std::sqrt(squared.convert_to<double>());

  const int phase_exp = j1 - j2 - m3;
  const bool negative = ((phase_exp % 2) != 0) != (s_num < 0);
  return negative ? -magnitude : magnitude;
}

// Symbols with every j <= kTableJ are served from a table built once
// (thread-safe static init); the values are bit-identical to racah().
constexpr int kTableJ = 3;
constexpr int kSpan = kTableJ + 1;
constexpr int kMSpan = 2 * kTableJ + 1;

struct SmallTable {
  std::array<double, kSpan * kSpan * kSpan * kMSpan * kMSpan> v{};

  static std::size_t index(int j1, int j2, int j3, int m1, int m2) {
    return ((((static_cast<std::size_t>(j1) * kSpan + j2) * kSpan + j3) * kMSpan +
             (m1 + kTableJ)) * kMSpan) + (m2 + kTableJ);
  }

  SmallTable() {
    for (int j1 = 0; j1 <= kTableJ; ++j1)
      for (int j2 = 0; j2 <= kTableJ; ++j2)
        for (int j3 = 0; j3 <= kTableJ; ++j3) {
          if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) continue;
          for (int m1 = -j1; m1 <= j1; ++m1)
            for (int m2 = -j2; m2 <= j2; ++m2) {
              const int m3 = -m1 - m2;
              if (std::abs(m3) > j3) continue;
              v[index(j1, j2, j3, m1, m2)] = racah(j1, j2, j3, m1, m2, m3);
            }
        }
  }
};

const SmallTable& small_table() {
  static const SmallTable table;
  return table;
}

}  // namespace

double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  check_args(j1, j2, j3, m1, m2, m3);
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  if (j1 <= kTableJ && j2 <= kTableJ && j3 <= kTableJ)
    return small_table().v[SmallTable::index(j1, j2, j3, m1, m2)];
  return racah(j1, j2, j3, m1, m2, m3);
}

double w_coupling(int J, int M, int Jp, int Mp, int sigma) {
  if (sigma < -1 || sigma > 1) throw DomainError("w_coupling: sigma must be -1, 0 or +1");
  return wigner3j(J, 1, Jp, M, -sigma, -Mp);
}

}  // namespace deltaloop::wigner
