#include "wekac/tau.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <utility>

#include "wekac/error.hpp"

namespace wekac {

namespace {

// Moduli are template parameters so the reductions compile to multiply-shift
// sequences rather than hardware division.
template <std::uint32_t Mod>
std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  b %= Mod;
  while (e) {
    if (e & 1) r = r * b % Mod;
    b = b * b % Mod;
    e >>= 1;
  }
  return r;
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// 32-bit Montgomery arithmetic modulo an odd prime below 2^30. Reductions are
// branch-free: GCC's path splitting otherwise turns them into mispredicted jumps.
template <std::uint32_t Mod>
struct Mont {
  static constexpr std::uint32_t neg_inv = [] {
    std::uint32_t inv = Mod;  // Newton iteration for Mod^{-1} mod 2^32
    for (int i = 0; i < 5; ++i) inv *= 2u - Mod * inv;
    return 0u - inv;
  }();
  static constexpr std::uint32_t r2 = static_cast<std::uint32_t>((static_cast<UInt128>(1) << 64) % Mod);

  // Maps [-Mod, Mod) (as wrapped uint32) into [0, Mod) without a branch; Mod < 2^30.
  static std::uint32_t fix(std::uint32_t x) { return x + (Mod & (0u - (x >> 31))); }
  static std::uint32_t reduce(std::uint64_t t) {
    const std::uint32_t m = static_cast<std::uint32_t>(t) * neg_inv;
    return fix(static_cast<std::uint32_t>((t + static_cast<std::uint64_t>(m) * Mod) >> 32) - Mod);
  }
  static std::uint32_t mul(std::uint32_t a, std::uint32_t b) { return reduce(static_cast<std::uint64_t>(a) * b); }
  static std::uint32_t to(std::uint32_t a) { return mul(a, r2); }
  static std::uint32_t from(std::uint32_t a) { return reduce(a); }
};

// In-place transform on values held in Montgomery form.
template <std::uint32_t Mod, std::uint32_t Root>
void ntt(std::vector<std::uint32_t>& a, bool invert) {
  using M = Mont<Mod>;
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<std::uint32_t> roots(n / 2);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::uint64_t w = pow_mod<Mod>(Root, (Mod - 1) / len);
    if (invert) w = pow_mod<Mod>(w, Mod - 2);
    const std::uint32_t wm = M::to(static_cast<std::uint32_t>(w));
    const std::size_t half = len / 2;
    roots[0] = M::to(1);
    for (std::size_t k = 1; k < half; ++k) roots[k] = M::mul(roots[k - 1], wm);
    for (std::size_t i = 0; i < n; i += len) {
      std::uint32_t* lo = a.data() + i;
      std::uint32_t* hi = lo + half;
      for (std::size_t k = 0; k < half; ++k) {
        const std::uint32_t u = lo[k];
        const std::uint32_t v = M::mul(hi[k], roots[k]);
        lo[k] = M::fix(u + v - Mod);
        hi[k] = M::fix(u - v);
      }
    }
  }
  if (invert) {
    const std::uint32_t inv_n = M::to(static_cast<std::uint32_t>(pow_mod<Mod>(n, Mod - 2)));
    for (auto& x : a) x = M::mul(x, inv_n);
  }
}

// Squares a series truncated to `len` coefficients, modulo Mod.
template <std::uint32_t Mod, std::uint32_t Root>
void square_truncated(std::vector<std::uint32_t>& a, std::size_t len) {
  using M = Mont<Mod>;
  std::size_t n = 1;
  while (n < 2 * len) n <<= 1;
  a.resize(n, 0);
  for (auto& x : a) x = M::to(x);
  ntt<Mod, Root>(a, false);
  for (auto& x : a) x = M::mul(x, x);
  ntt<Mod, Root>(a, true);
  a.resize(len);
  for (auto& x : a) x = M::from(x);
}

// (eta^3)^8 modulo Mod, shifted by `offset`, first `len` coefficients.
template <std::uint32_t Mod, std::uint32_t Root>
std::vector<std::uint32_t> eta24_residues(std::size_t len, UInt128 offset) {
  std::vector<std::uint32_t> a(len, 0);
  // Jacobi: eta^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}.
  for (std::uint64_t k = 0;; ++k) {
    const std::uint64_t e = k * (k + 1) / 2;
    if (e >= len) break;
    const std::uint64_t c = (2 * k + 1) % Mod;
    a[e] = static_cast<std::uint32_t>((k & 1) ? (Mod - c) % Mod : c);
  }
  for (int s = 0; s < 3; ++s) square_truncated<Mod, Root>(a, len);
  const std::uint64_t off = static_cast<std::uint64_t>(offset % Mod);
  for (auto& x : a) x = static_cast<std::uint32_t>((x + off) % Mod);
  return a;
}

// All support transforms of length 2^23, enough for the hard cap.
constexpr std::array<std::uint32_t, 5> kMods = {998244353u, 897581057u, 880803841u, 754974721u, 645922817u};
constexpr std::array<std::uint32_t, 5> kRoots = {3u, 3u, 26u, 11u, 3u};

template <std::size_t... I>
std::vector<std::vector<std::uint32_t>> all_residues(std::size_t len, UInt128 offset,
                                                     std::index_sequence<I...>) {
  return {eta24_residues<kMods[I], kRoots[I]>(len, offset)...};
}

}  // namespace

std::vector<Int128> tau_series(std::uint64_t limit, std::uint64_t cap) {
  if (limit == 0) throw DomainError("tau_series: limit must be positive");
  if (cap > kTauHardCap)
    throw CapacityError("tau_series: cap " + std::to_string(cap) + " exceeds the hard cap " +
                        std::to_string(kTauHardCap));
  if (limit > cap)
    throw CapacityError("tau_series: limit " + std::to_string(limit) + " exceeds cap " +
                        std::to_string(cap));

  // tau(n) is the coefficient of q^{n-1} in prod (1-q^k)^24 = (eta^3)^8.
  const std::size_t len = limit;
  // Residues are taken of tau(n) + 2^126, which lies in (0, 2^127) for every
  // n up to the hard cap, so Garner reconstruction never leaves 128 bits.
  const UInt128 offset = static_cast<UInt128>(1) << 126;
  const auto residues = all_residues(len, offset, std::make_index_sequence<kMods.size()>{});

  // Garner: x = d0 + m0 (d1 + m1 (d2 + ...)).
  const std::size_t np = kMods.size();
  std::array<std::array<std::uint64_t, kMods.size()>, kMods.size()> inv{};
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < i; ++j)
      inv[i][j] = pow_mod(kMods[j], kMods[i] - 2, kMods[i]);

  std::vector<Int128> out(limit + 1, 0);
  std::array<std::uint64_t, kMods.size()> d{};
  for (std::size_t n = 0; n < len; ++n) {
    for (std::size_t i = 0; i < np; ++i) {
      const std::uint64_t mi = kMods[i];
      std::uint64_t v = residues[i][n];
      for (std::size_t j = 0; j < i; ++j) {
        v = (v + mi - d[j] % mi) % mi;
        v = v * inv[i][j] % mi;
      }
      d[i] = v;
    }
    UInt128 x = d[np - 1];
    for (std::size_t i = np - 1; i-- > 0;) x = x * kMods[i] + d[i];
    if (x >> 127) throw CapacityError("tau_series: coefficient exceeds 128-bit range");
    out[n + 1] = static_cast<Int128>(x) - static_cast<Int128>(offset);
  }
  return out;
}

std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  UInt128 u = neg ? -static_cast<UInt128>(v) : static_cast<UInt128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

namespace catalog {

WeightSpec tau_squared(const CatalogLimits& limits) {
  const auto tau = tau_series(limits.limit, limits.tau_cap);
  const auto primes = primes_up_to(limits.limit);
  // Normalized Hecke eigenvalue t_p = tau(p)/p^{11/2}, |t_p| <= 2.
  auto normalized = std::make_shared<std::vector<double>>(limits.limit + 1, 0.0);
  for (auto p : primes) {
    const long double t = static_cast<long double>(tau[p]);
    (*normalized)[p] = static_cast<double>(t / std::pow(static_cast<long double>(p), 5.5L));
  }
  const std::uint64_t limit = limits.limit;

  WeightSpec w;
  w.name = "tau2";
  w.rule = [normalized, limit](std::uint64_t p, std::uint32_t nu) {
    if (p > limit)
      throw CapacityError("tau2 weight: prime " + std::to_string(p) + " beyond series limit " +
                          std::to_string(limit));
    const double t = (*normalized)[p];
    double prev = 1.0, cur = t;
    if (nu == 0) return 1.0;
    for (std::uint32_t k = 1; k < nu; ++k) {
      const double next = t * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur * cur;
  };
  w.params.beta = 1.0;
  w.params.sigma0 = 1.0;
  w.params.theta0 = 0.0;
  w.params.rho0 = 0.5;
  w.params.r = 0.9;
  // From Deligne's bound |a(p^nu)| <= nu+1: sup (nu+1)^2 / 2^{nu/2}.
  double ci = 0.0;
  double civ = 0.0;
  for (int nu = 1; nu <= 200; ++nu) {
    ci = std::max(ci, (nu + 1.0) * (nu + 1.0) / std::pow(2.0, nu / 2.0));
    civ += 2.0 * nu * (nu + 1.0) * (nu + 1.0) / std::pow(2.0, nu);
  }
  w.params.cond_i_constant = ci;
  w.params.cond_iv_constant = civ;
  w.params.cond_ii_constant = 1.0;
  w.params.verified = true;
  w.description = {{"name", "tau2"}};
  return w;
}

}  // namespace catalog

}  // namespace wekac
