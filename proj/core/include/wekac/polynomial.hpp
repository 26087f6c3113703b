#pragma once

#include <cstdint>
#include <vector>

#include "wekac/int128.hpp"

#include "wekac/functions.hpp"
#include "wekac/sieve.hpp"

namespace wekac {

/// Integer polynomial g with coefficients in ascending order, plus the
/// denominator-clearing constant c_g.
struct PolySpec {
  std::vector<std::int64_t> coeffs;
  std::int64_t c_g = 1;

  unsigned degree() const { return static_cast<unsigned>(coeffs.size() - 1); }
  std::int64_t constant_term() const { return coeffs.front(); }
};

/// Validates a polynomial: nonconstant, nonzero leading coefficient,
/// g(0) != 0, c_g >= 1, and no rational root when deg g is 2 or 3.
PolySpec make_poly(std::vector<std::int64_t> coeffs, std::int64_t c_g = 1);

/// g(n) exactly; CapacityError on 128-bit overflow.
Int128 poly_value(const PolySpec& g, std::uint64_t n);

/// Number of distinct roots of g mod p, for p prime; 0 when p | c_g.
std::uint64_t count_roots_mod_prime(const PolySpec& g, std::uint64_t p);

/// rho_g(p^nu). Primes where g stays squarefree mod p lift uniquely; other
/// primes are enumerated by Hensel lifting, which requires p^nu <= cap.
std::uint64_t rho_g(const PolySpec& g, std::uint64_t p, std::uint32_t nu,
                    std::uint64_t cap = 1000000);

/// rho_g(n) by multiplicativity.
std::uint64_t rho_g(const PolySpec& g, const Factorization& fac, std::uint64_t cap = 1000000);

/// Brute-force residue count, independent of the fast paths.
std::uint64_t rho_g_enumerate(const PolySpec& g, std::uint64_t n);

namespace catalog {

WeightSpec rho_g(const PolySpec& g, const CatalogLimits& limits);

}  // namespace catalog

}  // namespace wekac
