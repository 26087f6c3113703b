#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wekac/exec.hpp"

namespace wekac {

struct PrimePower {
  std::uint64_t p = 0;
  std::uint32_t nu = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization with strictly increasing primes. Fixed capacity: any
/// integer below 2^64 has at most 15 distinct prime factors.
class Factorization {
 public:
  static constexpr std::size_t kCapacity = 15;

  Factorization() = default;

  void push(std::uint64_t p, std::uint32_t nu);
  void clear() { size_ = 0; }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const PrimePower& operator[](std::size_t i) const { return data_[i]; }
  const PrimePower* begin() const { return data_.data(); }
  const PrimePower* end() const { return data_.data() + size_; }
  std::span<const PrimePower> factors() const { return {data_.data(), size_}; }

  /// Reconstructs the integer; throws CapacityError past 2^64.
  std::uint64_t value() const;
  /// Product of the distinct primes (R_n).
  std::uint64_t radical() const;
  std::uint32_t omega() const { return static_cast<std::uint32_t>(size_); }
  std::uint32_t big_omega() const;
  bool squarefree() const;
  bool divisible_by(std::uint64_t p) const;

  friend bool operator==(const Factorization& a, const Factorization& b);

 private:
  std::array<PrimePower, kCapacity> data_{};
  std::size_t size_ = 0;
};

/// Smallest-prime-factor table over [2, limit].
///
/// Entries up to `dense_cap` are stored as 32-bit words; above that the table
/// keeps only the base primes up to sqrt(limit) and factors by segmented
/// sieving (scans) or trial division (point queries). Immutable once built.
class SieveTable {
 public:
  static constexpr std::uint64_t kMaxLimit = std::uint64_t{1} << 32;

  struct Options {
    std::uint64_t dense_cap = std::uint64_t{1} << 26;
    std::uint64_t segment_size = std::uint64_t{1} << 22;
    std::uint64_t memory_cap = kMaxLimit;
  };

  explicit SieveTable(std::uint64_t limit) : SieveTable(limit, Options{}) {}
  SieveTable(std::uint64_t limit, Options options);

  std::uint64_t limit() const { return limit_; }
  std::uint64_t dense_limit() const { return dense_limit_; }
  const Options& options() const { return options_; }

  std::uint64_t spf(std::uint64_t n) const;
  bool is_prime(std::uint64_t n) const;

  Factorization factorize(std::uint64_t n) const;

  /// Ascending primes <= bound (bound <= limit).
  std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) const;

  /// Calls fn(n, factorization) for n in [lo, hi] in increasing order.
  void for_each_factorization(
      std::uint64_t lo, std::uint64_t hi,
      const std::function<void(std::uint64_t, const Factorization&)>& fn) const;

  /// Primes stored in the dense region, ascending.
  std::span<const std::uint32_t> dense_primes() const { return dense_primes_; }

 private:
  void factor_segment(std::uint64_t lo, std::uint64_t hi,
                      const std::function<void(std::uint64_t, const Factorization&)>& fn) const;
  Factorization trial_factor(std::uint64_t n) const;

  std::uint64_t limit_;
  std::uint64_t dense_limit_;
  Options options_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> dense_primes_;
};

SieveTable build_sieve(std::uint64_t limit, SieveTable::Options options = {});
Factorization factorize(std::uint64_t n, const SieveTable& table);
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, const SieveTable& table);
/// Standalone sieve of Eratosthenes, for callers without a table.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Trial-division factorization of an arbitrary n >= 1 against the table's
/// primes; requires table.limit() >= sqrt(n).
Factorization trial_factorize(std::uint64_t n, const SieveTable& table);
/// Plain trial division, for small arguments such as moduli.
Factorization trial_factorize(std::uint64_t n);

}  // namespace wekac
