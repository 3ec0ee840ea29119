#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "anderson/lattice.hpp"

namespace anderson {

/// One-particle state: amplitude psi_i of the single excitation on site i,
/// in the occupation-number basis. Always normalized to 1e-10.
class State {
 public:
  enum class Normalization { Require, Normalize };

  explicit State(std::vector<Complex> amplitudes, Normalization mode = Normalization::Require);

  static State from_real(std::span<const double> amplitudes, Normalization mode = Normalization::Require);
  // Equal-amplitude superposition over n sites.
  static State w(std::size_t n);
  // Particle pinned on `site` (0-based).
  static State delta(std::size_t n, std::size_t site);

  std::size_t size() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  double magnitude(std::size_t i) const { return std::abs(amps_[i]); }

 private:
  std::vector<Complex> amps_;
};

inline constexpr double kNormTolerance = 1e-10;

/// C_ij = 2 |psi_i| |psi_j| for i != j.
double concurrence_pair(const State& s, std::size_t i, std::size_t j);

/// Mean pairwise concurrence over all N(N-1)/2 pairs in O(N):
///   <C> = [(sum_i |psi_i|)^2 - sum_i |psi_i|^2] / M.
/// The subtracted term is 1 for a normalized state; keeping it explicit
/// avoids cancellation against the rounding of the norm.
double average_concurrence(const State& s);

/// Nearest-neighbour concurrences 2|psi_i||psi_{i+1}|: N-1 entries for open
/// chains, N for rings (last entry is the wraparound pair).
std::vector<double> nn_profile(const State& s, Boundary bc);

struct OffsetConcurrence {
  std::ptrdiff_t offset;
  double value;
};

/// C_j = 2|psi_{i0+j}||psi_{i0}| for every other site, with i0 the
/// localization center and signed offsets j. On a ring each site appears once
/// with j in [-floor((N-1)/2), ceil((N-1)/2)].
std::vector<OffsetConcurrence> center_profile(const State& s, Boundary bc);

// Site index of i0 + offset, wrapping on rings. Returns size() when the site
// falls off an open chain.
std::size_t offset_site(std::size_t n, std::size_t center, std::ptrdiff_t offset, Boundary bc);

}  // namespace anderson
