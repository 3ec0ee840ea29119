#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "anderson/entanglement.hpp"
#include "anderson/lattice.hpp"
#include "anderson/tridiagonal.hpp"

namespace anderson {

struct PropagatorConfig {
  double dt = 0.05;
  double total_time = 400.0;
  std::size_t record_stride = 20;  // steps between recorded samples
  std::size_t snapshot_stride = 0;  // records between state snapshots; 0 = none

  // dt in (0, 0.1], total_time >= dt, record_stride >= 1.
  void validate() const;
  std::size_t steps() const;
};

class InitialState {
 public:
  enum class Kind { Delta, W, Custom };

  // Particle on `site` (0-based).
  static InitialState delta(std::size_t site);
  // Particle on site N/2 (1-based), i.e. index N/2 - 1.
  static InitialState delta_at_middle();
  static InitialState w();
  static InitialState custom(State s);

  Kind kind() const noexcept { return kind_; }
  std::optional<std::size_t> site() const noexcept { return site_; }
  const std::optional<State>& custom_state() const noexcept { return custom_; }

  State materialize(std::size_t n) const;

 private:
  Kind kind_ = Kind::W;
  std::optional<std::size_t> site_;
  std::optional<State> custom_;
};

/// Crank-Nicolson propagator for i dpsi/dt = H psi:
///   (I + i dt/2 H) psi' = (I - i dt/2 H) psi.
/// The left-hand matrix is factored once; each step is one O(N) apply and
/// one O(N) cyclic tridiagonal solve.
class CrankNicolson {
 public:
  CrankNicolson(const Hamiltonian& h, double dt);

  double dt() const noexcept { return dt_; }
  void advance(std::vector<Complex>& psi) const;

 private:
  Hamiltonian h_;
  double dt_;
  CyclicTridiagonalSolver<Complex> solver_;
};

/// One Crank-Nicolson step. No renormalization is applied.
State step(const Hamiltonian& h, const State& s, double dt);

struct TimeSample {
  double time = 0.0;
  double avg_concurrence = 0.0;
  std::optional<State> snapshot;
};

/// Samples at t = 0 and every record_stride steps (plus the final step if
/// the stride does not land on it).
std::vector<TimeSample> evolve_record(const Hamiltonian& h, const InitialState& init, const PropagatorConfig& cfg);

}  // namespace anderson
