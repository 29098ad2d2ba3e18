#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tiesmatch/graph.hpp"
#include "tiesmatch/instance.hpp"

namespace tiesmatch {

inline constexpr std::size_t kDefaultOracleGuard = 24;

class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  std::size_t max_cardinality = 0;
  std::vector<Matching> witnesses;  // every stable matching of max size, sorted
  std::size_t total_stable_count = 0;
  std::size_t min_cardinality = 0;  // smallest stable matching
};

/// Exhaustive search: men in declaration order, each assigned Nobody or a
/// free neighbor, pruning as soon as a pair with both sides settled blocks.
/// Throws InstanceTooLarge when |E| exceeds `guard`.
std::vector<Matching> enumerate_stable(const Instance& instance,
                                       std::size_t guard = kDefaultOracleGuard);

OracleResult max_stable(const Instance& instance, std::size_t guard = kDefaultOracleGuard);

}  // namespace tiesmatch
