#include "wekac/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wekac/error.hpp"

namespace wekac {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

void Factorization::push(std::uint64_t p, std::uint32_t nu) {
  if (size_ == kCapacity) throw CapacityError("factorization capacity exceeded");
  if (size_ > 0 && data_[size_ - 1].p >= p)
    throw DomainError("factorization primes must be strictly increasing");
  data_[size_++] = PrimePower{p, nu};
}

std::uint64_t Factorization::value() const {
  std::uint64_t n = 1;
  for (const auto& [p, nu] : factors()) {
    for (std::uint32_t i = 0; i < nu; ++i) {
      if (__builtin_mul_overflow(n, p, &n)) throw CapacityError("factorization value overflows");
    }
  }
  return n;
}

std::uint64_t Factorization::radical() const {
  std::uint64_t r = 1;
  for (const auto& pp : factors()) {
    if (__builtin_mul_overflow(r, pp.p, &r)) throw CapacityError("radical overflows");
  }
  return r;
}

std::uint32_t Factorization::big_omega() const {
  std::uint32_t total = 0;
  for (const auto& pp : factors()) total += pp.nu;
  return total;
}

bool Factorization::squarefree() const {
  return std::all_of(begin(), end(), [](const PrimePower& pp) { return pp.nu == 1; });
}

bool Factorization::divisible_by(std::uint64_t p) const {
  return std::any_of(begin(), end(), [p](const PrimePower& pp) { return pp.p == p; });
}

bool operator==(const Factorization& a, const Factorization& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

SieveTable::SieveTable(std::uint64_t limit, Options options)
    : limit_(limit), options_(options) {
  if (limit < 2) throw DomainError("sieve limit must be at least 2");
  if (limit > options_.memory_cap || limit > kMaxLimit)
    throw CapacityError("sieve limit " + std::to_string(limit) + " exceeds memory cap");
  if (options_.segment_size == 0) throw DomainError("segment size must be positive");

  dense_limit_ = std::min(limit, std::max<std::uint64_t>(options_.dense_cap, isqrt(limit) + 1));

  // Linear sieve: every composite is struck exactly once by its smallest prime.
  spf_.assign(dense_limit_ + 1, 0);
  for (std::uint64_t i = 2; i <= dense_limit_; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      dense_primes_.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t si = spf_[i];
    for (std::uint32_t p : dense_primes_) {
      if (p > si || i * p > dense_limit_) break;
      spf_[i * p] = p;
    }
  }
}

std::uint64_t SieveTable::spf(std::uint64_t n) const {
  if (n < 2 || n > limit_) throw DomainError("spf argument outside [2, limit]");
  if (n <= dense_limit_) return spf_[n];
  for (std::uint32_t p : dense_primes_) {
    if (std::uint64_t{p} * p > n) break;
    if (n % p == 0) return p;
  }
  return n;
}

bool SieveTable::is_prime(std::uint64_t n) const { return n >= 2 && spf(n) == n; }

Factorization SieveTable::trial_factor(std::uint64_t n) const {
  Factorization fac;
  for (std::uint32_t p : dense_primes_) {
    if (std::uint64_t{p} * p > n) break;
    if (n % p == 0) {
      std::uint32_t nu = 0;
      do {
        n /= p;
        ++nu;
      } while (n % p == 0);
      fac.push(p, nu);
    }
  }
  if (n > 1) fac.push(n, 1);
  return fac;
}

Factorization SieveTable::factorize(std::uint64_t n) const {
  if (n == 0 || n > limit_) throw DomainError("factorize argument outside [1, limit]");
  Factorization fac;
  if (n > dense_limit_) return trial_factor(n);
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    std::uint32_t nu = 0;
    do {
      n /= p;
      ++nu;
    } while (n % p == 0);
    fac.push(p, nu);
  }
  return fac;
}

std::vector<std::uint64_t> SieveTable::primes_up_to(std::uint64_t bound) const {
  if (bound > limit_) throw DomainError("primes_up_to bound exceeds sieve limit");
  std::vector<std::uint64_t> out;
  for (std::uint32_t p : dense_primes_) {
    if (p > bound) return out;
    out.push_back(p);
  }
  // Segmented Eratosthenes above the dense region.
  std::uint64_t lo = dense_limit_ + 1;
  std::vector<char> composite;
  while (lo <= bound) {
    const std::uint64_t hi = std::min(bound, lo + options_.segment_size - 1);
    composite.assign(hi - lo + 1, 0);
    for (std::uint32_t p : dense_primes_) {
      const std::uint64_t pp = std::uint64_t{p} * p;
      if (pp > hi) break;
      std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= hi; m += p) composite[m - lo] = 1;
    }
    for (std::uint64_t n = lo; n <= hi; ++n)
      if (!composite[n - lo]) out.push_back(n);
    lo = hi + 1;
  }
  return out;
}

void SieveTable::factor_segment(
    std::uint64_t lo, std::uint64_t hi,
    const std::function<void(std::uint64_t, const Factorization&)>& fn) const {
  const std::uint64_t len = hi - lo + 1;
  std::vector<std::uint64_t> rem(len);
  std::vector<Factorization> facs(len);
  for (std::uint64_t i = 0; i < len; ++i) rem[i] = lo + i;
  for (std::uint32_t p : dense_primes_) {
    if (std::uint64_t{p} * p > hi) break;
    for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
      std::uint64_t& r = rem[m - lo];
      std::uint32_t nu = 0;
      do {
        r /= p;
        ++nu;
      } while (r % p == 0);
      facs[m - lo].push(p, nu);
    }
  }
  for (std::uint64_t i = 0; i < len; ++i) {
    if (rem[i] > 1) facs[i].push(rem[i], 1);
    fn(lo + i, facs[i]);
  }
}

void SieveTable::for_each_factorization(
    std::uint64_t lo, std::uint64_t hi,
    const std::function<void(std::uint64_t, const Factorization&)>& fn) const {
  if (lo == 0 || hi > limit_) throw DomainError("scan range outside [1, limit]");
  std::uint64_t n = lo;
  for (; n <= hi && n <= dense_limit_; ++n) fn(n, factorize(n));
  while (n <= hi) {
    const std::uint64_t seg_hi = std::min(hi, n + options_.segment_size - 1);
    factor_segment(n, seg_hi, fn);
    n = seg_hi + 1;
  }
}

SieveTable build_sieve(std::uint64_t limit, SieveTable::Options options) {
  return SieveTable(limit, options);
}

Factorization factorize(std::uint64_t n, const SieveTable& table) { return table.factorize(n); }

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  if (limit > SieveTable::kMaxLimit) throw CapacityError("prime bound exceeds cap");
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, const SieveTable& table) {
  return table.primes_up_to(limit);
}

Factorization trial_factorize(std::uint64_t n, const SieveTable& table) {
  if (n == 0) throw DomainError("cannot factor zero");
  const std::uint64_t root = isqrt(n);
  if (root > table.dense_limit())
    throw CapacityError("trial division of " + std::to_string(n) +
                        " needs primes beyond the sieve's dense region");
  Factorization fac;
  for (std::uint32_t p : table.dense_primes()) {
    if (std::uint64_t{p} * p > n) break;
    if (n % p == 0) {
      std::uint32_t nu = 0;
      do {
        n /= p;
        ++nu;
      } while (n % p == 0);
      fac.push(p, nu);
    }
  }
  if (n > 1) fac.push(n, 1);
  return fac;
}

Factorization trial_factorize(std::uint64_t n) {
  if (n == 0) throw DomainError("cannot factor 0");
  Factorization fac;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    std::uint32_t nu = 0;
    while (n % p == 0) {
      n /= p;
      ++nu;
    }
    if (nu) fac.push(p, nu);
  }
  if (n > 1) fac.push(n, 1);
  return fac;
}

}  // namespace wekac
