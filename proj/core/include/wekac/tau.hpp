#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wekac/int128.hpp"

#include "wekac/functions.hpp"

namespace wekac {


/// Largest n for which |tau(n)| <= d(n) n^{11/2} is guaranteed below 2^127.
inline constexpr std::uint64_t kTauHardCap = 2000000;

/// tau(0..limit) from q * prod (1 - q^n)^24, with tau(0) = 0.
///
/// Computed as q * (eta^3)^8 using Jacobi's series for eta^3 and three NTT
/// squarings modulo five primes, recombined by CRT. Exact up to kTauHardCap,
/// where Deligne's bound keeps every coefficient well inside 127 bits.
std::vector<Int128> tau_series(std::uint64_t limit, std::uint64_t cap = 1000000);

std::string to_string(Int128 v);

namespace catalog {

/// alpha(n) = tau(n)^2 / n^11 on [1, limits.limit].
WeightSpec tau_squared(const CatalogLimits& limits);

}  // namespace catalog

}  // namespace wekac
