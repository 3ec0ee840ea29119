#include "anderson/dynamics.hpp"

#include <cmath>
#include <string>

#include "anderson/error.hpp"

namespace anderson {

namespace {

CyclicTridiagonalSolver<Complex> factor_left_matrix(const Hamiltonian& h, double dt) {
  const std::size_t n = h.size();
  const Complex half_step(0.0, 0.5 * dt);
  std::vector<Complex> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 1.0 + half_step * h.potentials()[i];
  const Complex off = -half_step * h.hopping();
  const Complex corner = h.boundary() == Boundary::Periodic ? off : Complex{};
  return CyclicTridiagonalSolver<Complex>(std::move(diag), std::vector<Complex>(n - 1, off), corner);
}

}  // namespace

void PropagatorConfig::validate() const {
  if (!(dt > 0.0) || dt > 0.1) throw Error(ErrorKind::InvalidConfig, "time step must lie in (0, 0.1]");
  if (!(total_time >= dt) || !std::isfinite(total_time))
    throw Error(ErrorKind::InvalidConfig, "total time must be at least one time step");
  if (record_stride == 0) throw Error(ErrorKind::InvalidConfig, "record stride must be positive");
}

std::size_t PropagatorConfig::steps() const {
  return static_cast<std::size_t>(std::llround(total_time / dt));
}

InitialState InitialState::delta(std::size_t site) {
  InitialState s;
  s.kind_ = Kind::Delta;
  s.site_ = site;
  return s;
}

InitialState InitialState::delta_at_middle() {
  InitialState s;
  s.kind_ = Kind::Delta;
  return s;
}

InitialState InitialState::w() { return InitialState{}; }

InitialState InitialState::custom(State state) {
  InitialState s;
  s.kind_ = Kind::Custom;
  s.custom_ = std::move(state);
  return s;
}

State InitialState::materialize(std::size_t n) const {
  switch (kind_) {
    case Kind::W:
      return State::w(n);
    case Kind::Delta: {
      const std::size_t site = site_.value_or(n / 2 == 0 ? 0 : n / 2 - 1);
      if (site >= n) throw Error(ErrorKind::InvalidConfig, "delta site " + std::to_string(site) + " outside lattice");
      return State::delta(n, site);
    }
    case Kind::Custom:
      if (custom_->size() != n) throw Error(ErrorKind::Dimension, "custom initial state has the wrong size");
      return *custom_;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown initial state");
}

CrankNicolson::CrankNicolson(const Hamiltonian& h, double dt)
    : h_(h), dt_(dt), solver_(factor_left_matrix(h, dt)) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidConfig, "time step must be positive");
}

void CrankNicolson::advance(std::vector<Complex>& psi) const {
  const auto hpsi = h_.apply(std::span<const Complex>(psi));
  const Complex half_step(0.0, 0.5 * dt_);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] -= half_step * hpsi[i];
  solver_.solve_in_place(psi);
}

State step(const Hamiltonian& h, const State& s, double dt) {
  if (s.size() != h.size()) throw Error(ErrorKind::Dimension, "state and Hamiltonian sizes differ");
  CrankNicolson cn(h, dt);
  std::vector<Complex> psi(s.amplitudes().begin(), s.amplitudes().end());
  cn.advance(psi);
  return State(std::move(psi));
}

std::vector<TimeSample> evolve_record(const Hamiltonian& h, const InitialState& init, const PropagatorConfig& cfg) {
  cfg.validate();
  const State start = init.materialize(h.size());
  const CrankNicolson cn(h, cfg.dt);
  const std::size_t steps = cfg.steps();

  std::vector<Complex> psi(start.amplitudes().begin(), start.amplitudes().end());
  std::vector<TimeSample> out;
  out.reserve(steps / cfg.record_stride + 2);

  auto record = [&](std::size_t k) {
    State s(psi, State::Normalization::Require);
    TimeSample sample;
    sample.time = static_cast<double>(k) * cfg.dt;
    sample.avg_concurrence = average_concurrence(s);
    if (cfg.snapshot_stride > 0 && out.size() % cfg.snapshot_stride == 0) sample.snapshot = std::move(s);
    out.push_back(std::move(sample));
  };

  record(0);
  for (std::size_t k = 1; k <= steps; ++k) {
    cn.advance(psi);
    if (k % cfg.record_stride == 0 || k == steps) record(k);
  }
  return out;
}

}  // namespace anderson
