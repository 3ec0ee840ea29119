#pragma once

#include <cstddef>
#include <vector>

#include "anderson/entanglement.hpp"
#include "anderson/lattice.hpp"

namespace anderson {

struct EigenPair {
  double energy = 0.0;
  State state;  // real amplitudes; the largest-magnitude entry is positive
};

struct EigenSolverOptions {
  int max_inverse_iterations = 200;
  double bisection_width = 1e-12;
  // Eigenvalues closer than this (times H.scale()) are reorthogonalized
  // against each other during inverse iteration.
  double cluster_tolerance = 1e-3;
};

/// Number of eigenvalues of H strictly below x (up to the usual Sturm
/// rounding at x itself). Open chains use the LDL^T Sturm sequence; rings add
/// the corner site back through the Schur complement of the open chain of
/// the remaining N-1 sites, so both stay O(N).
std::size_t count_eigenvalues_below(const Hamiltonian& h, double x);

/// k-th smallest eigenvalue (0-based) by bisection on the eigenvalue count.
double bisect_eigenvalue(const Hamiltonian& h, std::size_t index, double width = 1e-12);

/// Lowest eigenpair. Throws ConvergenceError if inverse iteration does not
/// reach a residual of ~1e-12 * H.scale() within the iteration cap.
EigenPair ground_state(const Hamiltonian& h, const EigenSolverOptions& options = {});

/// The k lowest eigenpairs, energies nondecreasing. Degenerate clusters come
/// back as some orthonormal basis of the cluster.
std::vector<EigenPair> lowest_k(const Hamiltonian& h, std::size_t k, const EigenSolverOptions& options = {});

}  // namespace anderson
