#include "anderson/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anderson/error.hpp"
#include "anderson/rng.hpp"

namespace anderson {

std::string_view to_string(Boundary bc) noexcept {
  return bc == Boundary::Open ? "open" : "periodic";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "open" || text == "obc") return Boundary::Open;
  if (text == "periodic" || text == "pbc") return Boundary::Periodic;
  throw Error(ErrorKind::InvalidConfig, "unknown boundary condition '" + std::string(text) + "'");
}

void DisorderConfig::validate() const {
  if (size < 2) throw Error(ErrorKind::InvalidConfig, "lattice size must be at least 2");
  if (!(hopping > 0.0) || !std::isfinite(hopping))
    throw Error(ErrorKind::InvalidConfig, "hopping must be positive and finite");
  if (!(strength >= 0.0) || !std::isfinite(strength))
    throw Error(ErrorKind::InvalidConfig, "disorder strength must be nonnegative and finite");
  if (!std::isfinite(offset)) throw Error(ErrorKind::InvalidConfig, "offset must be finite");
}

std::vector<double> sample_disorder(const DisorderConfig& config) {
  config.validate();
  std::vector<double> v(config.size);
  GaussianStream stream(config.seed);
  for (double& x : v) x = config.offset + config.strength * stream.next();
  return v;
}

Hamiltonian::Hamiltonian(std::vector<double> potentials, double hopping, Boundary boundary)
    : potentials_(std::move(potentials)), hopping_(hopping), boundary_(boundary) {
  if (potentials_.size() < 2) throw Error(ErrorKind::InvalidConfig, "lattice size must be at least 2");
  if (!(hopping_ > 0.0)) throw Error(ErrorKind::InvalidConfig, "hopping must be positive");
}

double Hamiltonian::scale() const noexcept {
  double vmax = 0.0;
  for (double v : potentials_) vmax = std::max(vmax, std::abs(v));
  return vmax + 2.0 * hopping_;
}

Hamiltonian Hamiltonian::shifted(double shift) const {
  std::vector<double> v = potentials_;
  for (double& x : v) x += shift;
  return Hamiltonian(std::move(v), hopping_, boundary_);
}

template <class T>
std::vector<T> Hamiltonian::apply_impl(std::span<const T> v) const {
  const std::size_t n = size();
  if (v.size() != n) {
    throw Error(ErrorKind::Dimension, "vector length " + std::to_string(v.size()) +
                                          " does not match lattice size " + std::to_string(n));
  }
  std::vector<T> out(n);
  const double t = hopping_;
  for (std::size_t i = 0; i < n; ++i) {
    T acc = potentials_[i] * v[i];
    if (i > 0) acc -= t * v[i - 1];
    if (i + 1 < n) acc -= t * v[i + 1];
    out[i] = acc;
  }
  if (boundary_ == Boundary::Periodic) {
    out[0] -= t * v[n - 1];
    out[n - 1] -= t * v[0];
  }
  return out;
}

std::vector<Complex> Hamiltonian::apply(std::span<const Complex> v) const { return apply_impl(v); }
std::vector<double> Hamiltonian::apply(std::span<const double> v) const { return apply_impl(v); }

double Hamiltonian::expectation(std::span<const Complex> v) const {
  const auto hv = apply(v);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += (std::conj(v[i]) * hv[i]).real();
  return acc;
}

Hamiltonian build_hamiltonian(const DisorderConfig& config) {
  return Hamiltonian(sample_disorder(config), config.hopping, config.boundary);
}

}  // namespace anderson
