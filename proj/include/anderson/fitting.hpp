#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anderson {

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> params;
  double residual_norm = 0.0;  // ||y - model||_2
  double r2 = 0.0;
  bool converged = false;
  int iterations = 0;

  // Throws Error(OutOfRange) for an unknown name.
  double param(std::string_view name) const;
};

/// Levenberg-Marquardt knobs. Damping is Marquardt-scaled (mu * diag(J^T J)),
/// multiplied by 10 on a rejected step and divided by 10 on an accepted one.
struct LmOptions {
  int max_iterations = 500;
  double initial_damping = 1e-3;
  // Converged when every column of J is this close to orthogonal to r.
  double gradient_tolerance = 1e-10;
  // Converged when the relative parameter step falls below this.
  double step_tolerance = 1e-15;
  // When no step lowers the residual any more (damping overflow), the point
  // still counts as converged if the gradient cosine is below this.
  double stall_gradient_tolerance = 1e-6;
};

/// Model value at x; when `gradient` is non-empty it receives d(model)/d(param).
using ModelFunction = std::function<double(std::span<const double> params, double x, std::span<double> gradient)>;

FitResult levenberg_marquardt(const ModelFunction& model, std::span<const double> xs, std::span<const double> ys,
                              std::vector<double> initial, std::vector<std::string> names,
                              const LmOptions& options = {});

/// y = B exp(-x/D) + A, started from a log-linear fit of y - min(y).
FitResult fit_exp_single(std::span<const double> xs, std::span<const double> ys, const LmOptions& options = {});

/// y = B1 exp(-x/D1) + B2 exp(-x/D2), no offset. Multistart over
/// decade-spaced (D1, D2) pairs plus one start seeded from the
/// single-exponential fit; the lowest residual wins. The search runs in
/// ln D so both decay lengths stay positive. Reported with D1 < D2.
FitResult fit_exp_double(std::span<const double> xs, std::span<const double> ys, const LmOptions& options = {});

/// Ordinary least squares y = slope * x + intercept.
FitResult linear_fit(std::span<const double> xs, std::span<const double> ys);

struct PeakEstimate {
  double x = 0.0;
  double y = 0.0;
  bool interior = false;
};

/// Vertex of the parabola through the discrete argmax and its two
/// neighbours; the endpoint itself (interior = false) when the argmax is the
/// first or last sample. Needs >= 5 strictly increasing xs.
PeakEstimate find_interior_max(std::span<const double> xs, std::span<const double> ys);

// Same as find_interior_max without the minimum-length requirement (>= 1
// point). Used on coarse grids where an endpoint answer is still meaningful.
PeakEstimate locate_peak(std::span<const double> xs, std::span<const double> ys);

double coefficient_of_determination(std::span<const double> ys, std::span<const double> fitted);

}  // namespace anderson
