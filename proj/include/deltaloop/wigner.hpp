#pragma once

namespace deltaloop::wigner {

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3) for integer angular momenta.
///
/// Evaluated with the Racah single-sum formula in exact rational arithmetic;
/// the only floating-point operations are the final division and square
/// root, so the result is correctly rounded to within a couple of ulps for
/// every j this library uses (tested to j = 20). Symbols violating the
/// projection sum or the triangle rule are exactly 0.
///
/// Throws DomainError if any j is negative or |m_i| > j_i.
double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3);

/// W^(sigma)_{JM,J'M'} = 3j(J 1 J'; M -sigma -M').
///
/// Nonzero only when M - sigma - M' = 0, i.e. a sigma-polarized component
/// drives Delta M = sigma. Throws DomainError for |sigma| > 1 or bad (J, M).
double w_coupling(int J, int M, int Jp, int Mp, int sigma);

}  // namespace deltaloop::wigner
