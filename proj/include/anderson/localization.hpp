#pragma once

#include <cstddef>

#include "anderson/entanglement.hpp"
#include "anderson/lattice.hpp"

namespace anderson {

struct LocalizationReport {
  std::size_t center = 0;  // 0-based site of max |psi|
  double length = 0.0;     // xi, in lattice spacings
  double fit_r2 = 0.0;
  double participation_ratio = 1.0;
};

inline constexpr double kAmplitudeFloor = 1e-12;
inline constexpr std::size_t kMinLocalizationSites = 8;

// argmax |psi_i|, lowest index on ties.
std::size_t localization_center(const State& s);

// 1 / sum |psi_i|^4.
double participation_ratio(const State& s);

/// Fits ln|psi_i| = c - |i - i0| / xi by least squares over every site with
/// |psi_i| > floor, folding both sides of the center (shorter arc on rings).
///
/// Throws Error(InsufficientData) with fewer than 8 usable sites besides the
/// center, and Error(NonpositiveSlope) when the amplitudes do not decay.
LocalizationReport localization_length(const State& s, Boundary bc, double floor = kAmplitudeFloor);

}  // namespace anderson
