#include "anderson/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "anderson/error.hpp"
#include "anderson/rng.hpp"
#include "anderson/tridiagonal.hpp"

namespace anderson {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double pivmin_for(double t) { return std::numeric_limits<double>::min() / kEps * std::max(1.0, t * t); }

bool is_ring(const Hamiltonian& h) { return h.boundary() == Boundary::Periodic && h.size() >= 3; }

// Effective nearest-neighbour coupling: a two-site ring doubles the bond.
double bond(const Hamiltonian& h) {
  return (h.boundary() == Boundary::Periodic && h.size() == 2) ? 2.0 * h.hopping() : h.hopping();
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double normalize(std::vector<double>& v) {
  const double norm = std::sqrt(dot(v, v));
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return norm;
}

void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0.0) {
    for (double& x : v) x = -x;
  }
}

}  // namespace

std::size_t count_eigenvalues_below(const Hamiltonian& h, double x) {
  const auto v = h.potentials();
  const double t = bond(h);
  const double t2 = t * t;
  const double pivmin = pivmin_for(t);
  const std::size_t chain = is_ring(h) ? h.size() - 1 : h.size();

  std::size_t count = 0;
  double q = 0.0;
  // Schur complement pieces for the ring: y solves L y = b with b the
  // couplings of the last site to sites 0 and chain-1.
  double y = 0.0;
  double schur = 0.0;
  for (std::size_t i = 0; i < chain; ++i) {
    if (i == 0) {
      q = v[0] - x;
      y = -t;
    } else {
      const double l = -t / q;
      q = (v[i] - x) - t2 / q;
      y = (i + 1 == chain ? -t : 0.0) - l * y;
    }
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    if (is_ring(h)) schur += y * y / q;
  }
  if (is_ring(h)) {
    const double s = (v[chain] - x) - schur;
    if (!(s > 0.0)) ++count;
  }
  return count;
}

double bisect_eigenvalue(const Hamiltonian& h, std::size_t index, double width) {
  if (index >= h.size()) throw Error(ErrorKind::OutOfRange, "eigenvalue index out of range");
  const auto v = h.potentials();
  const double radius = 2.0 * h.hopping();
  double lo = *std::min_element(v.begin(), v.end()) - radius - 1e-9;
  double hi = *std::max_element(v.begin(), v.end()) + radius + 1e-9;
  const double floor_width = 4.0 * kEps * std::max(std::abs(lo), std::abs(hi));
  const double target = std::max(width, floor_width);
  for (int it = 0; it < 200 && hi - lo > target; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_eigenvalues_below(h, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<EigenPair> lowest_k(const Hamiltonian& h, std::size_t k, const EigenSolverOptions& options) {
  const std::size_t n = h.size();
  if (k == 0 || k > n) throw Error(ErrorKind::OutOfRange, "requested " + std::to_string(k) + " eigenpairs of a " +
                                                              std::to_string(n) + "-site lattice");
  const double scale = h.scale();
  const double residual_target = scale * std::max(1e-12, 32.0 * kEps * std::sqrt(static_cast<double>(n)));
  const double cluster_width = options.cluster_tolerance * scale;

  std::vector<double> shifts(k);
  for (std::size_t m = 0; m < k; ++m) shifts[m] = bisect_eigenvalue(h, m, options.bisection_width);

  std::vector<std::vector<double>> vectors;
  std::vector<double> energies;
  vectors.reserve(k);
  for (std::size_t m = 0; m < k; ++m) {
    const double sigma = shifts[m];
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = h.potentials()[i] - sigma;
    const double corner = h.boundary() == Boundary::Periodic ? -h.hopping() : 0.0;
    CyclicTridiagonalSolver<double> solver(std::move(diag), std::vector<double>(n - 1, -h.hopping()), corner,
                                           kEps * scale);

    std::vector<std::size_t> cluster;
    for (std::size_t j = 0; j < m; ++j) {
      if (std::abs(shifts[j] - sigma) <= cluster_width) cluster.push_back(j);
    }

    std::vector<double> x(n);
    std::uint64_t state = splitmix64(0x5EEDULL + m);
    for (double& xi : x) {
      state = splitmix64(state);
      xi = static_cast<double>(state >> 11) * 0x1.0p-52 - 1.0;
    }
    normalize(x);

    double residual = std::numeric_limits<double>::infinity();
    double rho = sigma;
    bool converged = false;
    int extra = 1;
    int it = 0;
    for (; it < options.max_inverse_iterations; ++it) {
      solver.solve_in_place(x);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j : cluster) {
          const double c = dot(vectors[j], x);
          for (std::size_t i = 0; i < n; ++i) x[i] -= c * vectors[j][i];
        }
      }
      if (!(normalize(x) > 0.0) || !std::isfinite(x[0])) {
        throw Error(ErrorKind::Numerical, "inverse iteration collapsed for eigenvalue index " + std::to_string(m));
      }
      const auto hx = h.apply(std::span<const double>(x));
      rho = dot(x, hx);
      double r2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) r2 += (hx[i] - rho * x[i]) * (hx[i] - rho * x[i]);
      residual = std::sqrt(r2);
      if (residual <= residual_target) {
        if (extra-- == 0) {
          converged = true;
          break;
        }
      }
    }
    if (!converged && residual <= residual_target) converged = true;
    if (!converged) {
      throw ConvergenceError("inverse iteration did not converge for eigenvalue index " + std::to_string(m) +
                                 " (residual " + std::to_string(residual) + " after " + std::to_string(it) +
                                 " iterations)",
                             static_cast<std::size_t>(it), residual);
    }
    fix_sign(x);
    energies.push_back(rho);
    vectors.push_back(std::move(x));
  }

  std::vector<std::size_t> order(k);
  for (std::size_t m = 0; m < k; ++m) order[m] = m;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });

  std::vector<EigenPair> out;
  out.reserve(k);
  for (std::size_t m : order) {
    out.push_back({energies[m], State::from_real(vectors[m], State::Normalization::Normalize)});
  }
  return out;
}

EigenPair ground_state(const Hamiltonian& h, const EigenSolverOptions& options) {
  return std::move(lowest_k(h, 1, options).front());
}

}  // namespace anderson
