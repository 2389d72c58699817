#pragma once

#include <cstdint>

namespace acs {

// Arithmetic operation counts, only collected in the ACS_INSTRUMENTED build.
struct OpCounts {
  std::uint64_t multiplications = 0;
  std::uint64_t divisions = 0;
  std::uint64_t additions = 0;   // model-update additions
  std::uint64_t renormalizations = 0;
  std::uint64_t carries = 0;
  std::uint64_t probes = 0;  // decoder comparisons against a cumulative bound
};

OpCounts& op_counts();
void reset_op_counts();

inline constexpr bool kInstrumented =
#ifdef ACS_INSTRUMENTED
    true;
#else
    false;
#endif

}  // namespace acs

#ifdef ACS_INSTRUMENTED
#define ACS_COUNT(field, n) (::acs::op_counts().field += (n))
#else
#define ACS_COUNT(field, n) ((void)0)
#endif
