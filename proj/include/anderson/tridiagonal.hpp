#pragma once

// Banded solvers shared by the eigensolver (real shifted systems) and the
// Crank-Nicolson propagator (complex systems).

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "anderson/error.hpp"

namespace anderson {

namespace detail {
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }
}  // namespace detail

/// LU factorization with partial pivoting of a general tridiagonal matrix,
/// following the LAPACK gttrf/gtts2 layout (U gains a second superdiagonal
/// when rows are swapped).
///
/// A zero pivot either raises Error(Numerical) or, when `pivot_floor` > 0, is
/// replaced by `pivot_floor`. The latter is what inverse iteration wants: a
/// shift sitting exactly on an eigenvalue must still produce a solve.
template <class T>
class TridiagonalLU {
 public:
  TridiagonalLU() = default;

  // lower[i] = A[i+1][i], upper[i] = A[i][i+1].
  TridiagonalLU(std::vector<T> diag, std::vector<T> lower, std::vector<T> upper, double pivot_floor = 0.0)
      : d_(std::move(diag)), dl_(std::move(lower)), du_(std::move(upper)) {
    const std::size_t n = d_.size();
    if (n == 0 || dl_.size() + 1 != n || du_.size() + 1 != n) {
      throw Error(ErrorKind::Dimension, "tridiagonal bands have inconsistent lengths");
    }
    du2_.assign(n > 2 ? n - 2 : 0, T{});
    swapped_.assign(n > 1 ? n - 1 : 0, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (detail::magnitude(d_[i]) >= detail::magnitude(dl_[i])) {
        if (d_[i] != T{}) {
          const T fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        }
      } else {
        const T fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const T temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (d_[i] == T{}) {
        if (pivot_floor > 0.0) {
          d_[i] = T(pivot_floor);
        } else {
          throw Error(ErrorKind::Numerical, "singular tridiagonal system (zero pivot at row " +
                                                std::to_string(i) + ")");
        }
      }
    }
  }

  std::size_t size() const noexcept { return d_.size(); }

  void solve_in_place(std::span<T> b) const {
    const std::size_t n = d_.size();
    if (b.size() != n) throw Error(ErrorKind::Dimension, "right-hand side length mismatch");
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const T temp = b[i] - dl_[i] * b[i + 1];
        b[i] = b[i + 1];
        b[i + 1] = temp;
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t k = n; k-- > 2;) {
      const std::size_t i = k - 2;
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }
  }

 private:
  std::vector<T> d_, dl_, du_, du2_;
  std::vector<bool> swapped_;
};

/// Symmetric tridiagonal matrix with an optional corner coupling
/// A[0][n-1] = A[n-1][0] = corner, solved through the Sherman-Morrison
/// identity on top of a TridiagonalLU so each solve stays O(n).
template <class T>
class CyclicTridiagonalSolver {
 public:
  CyclicTridiagonalSolver(std::vector<T> diag, std::vector<T> off, T corner, double pivot_floor = 0.0) {
    const std::size_t n = diag.size();
    if (n == 0 || off.size() + 1 != n) throw Error(ErrorKind::Dimension, "cyclic bands have inconsistent lengths");
    if (n == 2 && corner != T{}) {
      // Both bonds of a two-site ring land on the same matrix element.
      off[0] += corner;
      corner = T{};
    }
    cyclic_ = corner != T{};
    if (!cyclic_) {
      lu_ = TridiagonalLU<T>(std::move(diag), off, off, pivot_floor);
      return;
    }
    gamma_ = detail::magnitude(diag[0]) >= detail::magnitude(corner) ? -diag[0] : -corner;
    corner_over_gamma_ = corner / gamma_;
    diag[0] -= gamma_;
    diag[n - 1] -= corner * corner_over_gamma_;
    lu_ = TridiagonalLU<T>(std::move(diag), off, off, pivot_floor);

    z_.assign(n, T{});
    z_[0] = gamma_;
    z_[n - 1] = corner;
    lu_.solve_in_place(z_);
    denom_ = T(1.0) + z_[0] + corner_over_gamma_ * z_[n - 1];
    if (denom_ == T{}) {
      if (pivot_floor > 0.0) {
        denom_ = T(pivot_floor);
      } else {
        throw Error(ErrorKind::Numerical, "singular cyclic tridiagonal system");
      }
    }
  }

  std::size_t size() const noexcept { return lu_.size(); }

  void solve_in_place(std::span<T> b) const {
    lu_.solve_in_place(b);
    if (!cyclic_) return;
    const std::size_t n = b.size();
    const T factor = (b[0] + corner_over_gamma_ * b[n - 1]) / denom_;
    for (std::size_t i = 0; i < n; ++i) b[i] -= factor * z_[i];
  }

 private:
  TridiagonalLU<T> lu_;
  bool cyclic_ = false;
  T gamma_{};
  T corner_over_gamma_{};
  T denom_{};
  std::vector<T> z_;
};

}  // namespace anderson
