#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace anderson {

using Complex = std::complex<double>;

enum class Boundary { Open, Periodic };

std::string_view to_string(Boundary bc) noexcept;
Boundary parse_boundary(std::string_view text);

/// Full recipe for one disorder realization. Disorder is never stored; it is
/// regenerated from these fields.
struct DisorderConfig {
  std::size_t size = 1600;
  double hopping = 1.0;
  double offset = 0.0;    // V0
  double strength = 0.0;  // lambda
  std::uint64_t seed = 1;
  Boundary boundary = Boundary::Periodic;

  // Throws Error(InvalidConfig) when size < 2, hopping <= 0 or strength < 0.
  void validate() const;
};

/// V_i = offset + strength * eps_i, eps_i iid standard normal drawn from a
/// GaussianStream seeded with config.seed.
std::vector<double> sample_disorder(const DisorderConfig& config);

/// Tight-binding chain with on-site potentials and uniform hopping:
///   H[i][i] = V_i,  H[i][i+1] = H[i+1][i] = -t,
/// plus H[0][N-1] = H[N-1][0] = -t under periodic boundaries. For N = 2 the
/// periodic ring has two bonds between the same pair of sites, so the
/// coupling there is -2t.
class Hamiltonian {
 public:
  Hamiltonian(std::vector<double> potentials, double hopping, Boundary boundary);

  std::size_t size() const noexcept { return potentials_.size(); }
  std::span<const double> potentials() const noexcept { return potentials_; }
  double hopping() const noexcept { return hopping_; }
  Boundary boundary() const noexcept { return boundary_; }

  // max|V_i| + 2t; the reference magnitude for residual tolerances.
  double scale() const noexcept;

  // Same lattice with every potential shifted by `shift`.
  Hamiltonian shifted(double shift) const;

  std::vector<Complex> apply(std::span<const Complex> v) const;
  std::vector<double> apply(std::span<const double> v) const;

  // <v|H|v> for a (not necessarily normalized) vector.
  double expectation(std::span<const Complex> v) const;

 private:
  template <class T>
  std::vector<T> apply_impl(std::span<const T> v) const;

  std::vector<double> potentials_;
  double hopping_;
  Boundary boundary_;
};

Hamiltonian build_hamiltonian(const DisorderConfig& config);

}  // namespace anderson
