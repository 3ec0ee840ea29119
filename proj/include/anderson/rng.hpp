#pragma once

#include <cstdint>
#include <random>

namespace anderson {

// Bumped whenever the generator or the normal transform changes, since that
// would silently change every seeded disorder realization.
inline constexpr int kDisorderStreamVersion = 1;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Stable child seed for cell (lambda_index, realization) of a sweep.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t lambda_index,
                         std::uint64_t realization) noexcept;

/// Standard-normal stream: mt19937_64 feeding a Box-Muller
/// transform. Both pieces are fixed here rather than taken from
/// std::normal_distribution, whose algorithm differs between standard
/// libraries.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  double uniform_open_closed();  // (0, 1]
  double uniform_closed_open();  // [0, 1)

  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace anderson
