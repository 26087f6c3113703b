#include "wekac/exec.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace wekac {

ExecContext ExecContext::from_env() {
  ExecContext ctx;
  if (const char* env = std::getenv("WEKAC_WORKERS")) {
    std::string_view s(env);
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc{} && ptr == s.data() + s.size() && value > 0) ctx.workers = value;
  }
  return ctx;
}

void ExecContext::validate() const {
  if (workers == 0) throw DomainError("worker count must be positive");
  if (chunk_size == 0 || (chunk_size & (chunk_size - 1)) != 0)
    throw DomainError("chunk size must be a power of two");
}

}  // namespace wekac
