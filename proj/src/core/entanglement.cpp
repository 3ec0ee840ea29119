#include "anderson/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anderson/error.hpp"
#include "anderson/localization.hpp"

namespace anderson {

namespace {

double squared_norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

}  // namespace

State::State(std::vector<Complex> amplitudes, Normalization mode) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) throw Error(ErrorKind::Dimension, "state must have at least one site");
  for (const auto& z : amps_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::Numerical, "state has non-finite amplitudes");
  }
  const double norm2 = squared_norm(amps_);
  if (mode == Normalization::Normalize) {
    if (!(norm2 > 0.0)) throw Error(ErrorKind::Numerical, "cannot normalize the zero vector");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : amps_) z *= inv;
  } else if (std::abs(std::sqrt(norm2) - 1.0) > kNormTolerance) {
    throw Error(ErrorKind::InvalidConfig, "state is not normalized (norm " + std::to_string(std::sqrt(norm2)) + ")");
  }
}

State State::from_real(std::span<const double> amplitudes, Normalization mode) {
  return State(std::vector<Complex>(amplitudes.begin(), amplitudes.end()), mode);
}

State State::w(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::Dimension, "W state needs at least one site");
  return State(std::vector<Complex>(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0)));
}

State State::delta(std::size_t n, std::size_t site) {
  if (site >= n) throw Error(ErrorKind::OutOfRange, "delta site " + std::to_string(site) + " outside lattice");
  std::vector<Complex> v(n);
  v[site] = 1.0;
  return State(std::move(v));
}

double concurrence_pair(const State& s, std::size_t i, std::size_t j) {
  const std::size_t n = s.size();
  if (i >= n || j >= n) throw Error(ErrorKind::OutOfRange, "site index out of range");
  if (i == j) throw Error(ErrorKind::OutOfRange, "concurrence needs two distinct sites");
  return 2.0 * s.magnitude(i) * s.magnitude(j);
}

double average_concurrence(const State& s) {
  const std::size_t n = s.size();
  if (n < 2) return 0.0;
  double sum_abs = 0.0;
  double sum_sq = 0.0;
  for (const auto& z : s.amplitudes()) {
    const double a = std::abs(z);
    sum_abs += a;
    sum_sq += a * a;
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return std::max(0.0, sum_abs * sum_abs - sum_sq) / pairs;
}

std::vector<double> nn_profile(const State& s, Boundary bc) {
  const std::size_t n = s.size();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(2.0 * s.magnitude(i) * s.magnitude(i + 1));
  if (bc == Boundary::Periodic && n >= 2) out.push_back(2.0 * s.magnitude(n - 1) * s.magnitude(0));
  return out;
}

std::size_t offset_site(std::size_t n, std::size_t center, std::ptrdiff_t offset, Boundary bc) {
  const auto sn = static_cast<std::ptrdiff_t>(n);
  std::ptrdiff_t site = static_cast<std::ptrdiff_t>(center) + offset;
  if (bc == Boundary::Periodic) {
    site %= sn;
    if (site < 0) site += sn;
    return static_cast<std::size_t>(site);
  }
  if (site < 0 || site >= sn) return n;
  return static_cast<std::size_t>(site);
}

std::vector<OffsetConcurrence> center_profile(const State& s, Boundary bc) {
  const std::size_t n = s.size();
  const std::size_t center = localization_center(s);
  const double c0 = s.magnitude(center);
  std::ptrdiff_t lo, hi;
  if (bc == Boundary::Periodic) {
    lo = -static_cast<std::ptrdiff_t>((n - 1) / 2);
    hi = static_cast<std::ptrdiff_t>(n / 2);
  } else {
    lo = -static_cast<std::ptrdiff_t>(center);
    hi = static_cast<std::ptrdiff_t>(n - 1 - center);
  }
  std::vector<OffsetConcurrence> out;
  out.reserve(n - 1);
  for (std::ptrdiff_t j = lo; j <= hi; ++j) {
    if (j == 0) continue;
    const std::size_t site = offset_site(n, center, j, bc);
    out.push_back({j, 2.0 * c0 * s.magnitude(site)});
  }
  return out;
}

}  // namespace anderson
