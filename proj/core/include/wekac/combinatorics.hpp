#pragma once

#include <cstdint>
#include <vector>

#include "wekac/int128.hpp"

namespace wekac {


struct GaussianConstants {
  unsigned m = 0;
  double mu_m = 0.0;  // E[Z^m] for a standard normal Z
  double C_m = 0.0;   // E[|Z|^m]
  int chi_m = 0;      // 1 iff m even
};

/// 1 <= m <= 170.
GaussianConstants gaussian_constants(unsigned m);

/// (m-1)!! perfect matchings of m points; m even, m <= 170.
UInt128 pairing_count(unsigned m);

/// Stirling numbers of the second kind, k <= n <= 64.
UInt128 stirling2(unsigned n, unsigned k);

/// Row n of the Touchard polynomial T_n(t) = sum_k c_k t^k, built from the
/// recurrence T_{n+1}(t) = t sum_i C(n,i) T_i(t). n <= 64.
std::vector<UInt128> touchard_coefficients(unsigned n);
double touchard(unsigned n, double t);

/// Eulerian number <l, j>: permutations of l elements with j ascents. j <= l <= 20.
UInt128 eulerian(unsigned l, unsigned j);
/// A_l(z) = sum_j <l, j> z^j; A_0 = 1.
double eulerian_poly(unsigned l, double z);

/// Li_{-l}(z) = sum_{n>=1} n^l z^n = z A_l(z) / (1-z)^{l+1}, |z| < 1.
double polylog_neg(unsigned l, double z);
/// The defining series, summed until negligible.
double polylog_neg_series(unsigned l, double z);

/// (sum parts)! / prod parts!; sum <= 170.
UInt128 multinomial(const std::vector<unsigned>& parts);

UInt128 binomial(unsigned n, unsigned k);

}  // namespace wekac
