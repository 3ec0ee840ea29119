#include "anderson/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "anderson/error.hpp"

namespace anderson {

namespace {

void require_same_length(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::Dimension, "xs and ys differ in length");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw Error(ErrorKind::DegenerateInput, "fit data contains non-finite values");
  }
}

// Solves the symmetric positive-definite system a x = b in place (row-major
// m x m). Returns false when a is not numerically positive definite.
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) {
    double diag = a[j * m + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * m + k] * a[j * m + k];
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    diag = std::sqrt(diag);
    a[j * m + j] = diag;
    for (std::size_t i = j + 1; i < m; ++i) {
      double v = a[i * m + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * m + k] * a[j * m + k];
      a[i * m + j] = v / diag;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= a[i * m + k] * b[k];
    b[i] = v / a[i * m + i];
  }
  for (std::size_t i = m; i-- > 0;) {
    double v = b[i];
    for (std::size_t k = i + 1; k < m; ++k) v -= a[k * m + i] * b[k];
    b[i] = v / a[i * m + i];
  }
  return true;
}

// Fills residuals r = y - f and, if jac is non-empty, the n x m Jacobian of
// f. Returns the squared residual norm, or +inf if the model blew up.
double evaluate(const ModelFunction& model, std::span<const double> params, std::span<const double> xs,
                std::span<const double> ys, std::vector<double>& r, std::vector<double>* jac) {
  const std::size_t m = params.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::span<double> grad;
    if (jac) grad = std::span<double>(jac->data() + i * m, m);
    const double f = model(params, xs[i], grad);
    r[i] = ys[i] - f;
    ss += r[i] * r[i];
  }
  if (!std::isfinite(ss)) return std::numeric_limits<double>::infinity();
  if (jac) {
    for (double g : *jac) {
      if (!std::isfinite(g)) return std::numeric_limits<double>::infinity();
    }
  }
  return ss;
}

double single_exp_model(std::span<const double> p, double x, std::span<double> g) {
  const double e = std::exp(-x / p[1]);
  if (!g.empty()) {
    g[0] = e;
    g[1] = p[0] * e * x / (p[1] * p[1]);
    g[2] = 1.0;
  }
  return p[0] * e + p[2];
}

// Same model with D = exp(u), so the search cannot leave D > 0.
double double_exp_log_model(std::span<const double> p, double x, std::span<double> g) {
  const double d1 = std::exp(p[1]), d2 = std::exp(p[3]);
  const double e1 = std::exp(-x / d1);
  const double e2 = std::exp(-x / d2);
  if (!g.empty()) {
    g[0] = e1;
    g[1] = p[0] * e1 * x / d1;
    g[2] = e2;
    g[3] = p[2] * e2 * x / d2;
  }
  return p[0] * e1 + p[2] * e2;
}

void fill_r2(FitResult& fit, const ModelFunction& model, std::span<const double> xs, std::span<const double> ys) {
  std::vector<double> fitted(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fitted[i] = model(fit.params, xs[i], {});
  fit.r2 = coefficient_of_determination(ys, fitted);
}

}  // namespace

double FitResult::param(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return params[i];
  }
  throw Error(ErrorKind::OutOfRange, "fit has no parameter named '" + std::string(name) + "'");
}

double coefficient_of_determination(std::span<const double> ys, std::span<const double> fitted) {
  const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    ss_res += (ys[i] - fitted[i]) * (ys[i] - fitted[i]);
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

FitResult levenberg_marquardt(const ModelFunction& model, std::span<const double> xs, std::span<const double> ys,
                              std::vector<double> initial, std::vector<std::string> names,
                              const LmOptions& options) {
  require_same_length(xs, ys);
  const std::size_t n = xs.size();
  const std::size_t m = initial.size();
  if (n < m) throw Error(ErrorKind::DegenerateInput, "fewer data points than parameters");

  FitResult fit;
  fit.names = std::move(names);
  std::vector<double> p = std::move(initial);
  std::vector<double> r(n), r_trial(n), jac(n * m);
  double ss = evaluate(model, p, xs, ys, r, &jac);
  if (!std::isfinite(ss)) {
    fit.params = p;
    fit.residual_norm = std::numeric_limits<double>::infinity();
    fit.r2 = -std::numeric_limits<double>::infinity();
    return fit;
  }

  double y_norm = 0.0;
  for (double y : ys) y_norm += y * y;
  y_norm = std::sqrt(y_norm);

  double mu = options.initial_damping;
  std::vector<double> jtj(m * m), jtr(m), trial(m);
  bool converged = false;
  int iter = 0;
  bool need_jacobian_checks = true;
  double cosine = 1.0;

  while (iter < options.max_iterations) {
    if (need_jacobian_checks) {
      std::fill(jtj.begin(), jtj.end(), 0.0);
      std::fill(jtr.begin(), jtr.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = jac.data() + i * m;
        for (std::size_t a = 0; a < m; ++a) {
          jtr[a] += row[a] * r[i];
          for (std::size_t b = 0; b <= a; ++b) jtj[a * m + b] += row[a] * row[b];
        }
      }
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < a; ++b) jtj[b * m + a] = jtj[a * m + b];

      const double r_norm = std::sqrt(ss);
      if (r_norm <= 1e-14 * y_norm) {
        converged = true;
        break;
      }
      cosine = 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        const double col = std::sqrt(jtj[a * m + a]);
        if (col > 0.0) cosine = std::max(cosine, std::abs(jtr[a]) / (col * r_norm));
      }
      if (cosine <= options.gradient_tolerance) {
        converged = true;
        break;
      }
      need_jacobian_checks = false;
    }

    ++iter;
    std::vector<double> a = jtj;
    std::vector<double> delta = jtr;
    for (std::size_t k = 0; k < m; ++k) {
      const double d = jtj[k * m + k];
      a[k * m + k] += mu * (d > 0.0 ? d : 1.0);
    }
    if (!cholesky_solve(a, delta, m)) {
      mu *= 10.0;
      if (mu > 1e30) {
        converged = cosine <= options.stall_gradient_tolerance;
        break;
      }
      continue;
    }
    for (std::size_t k = 0; k < m; ++k) trial[k] = p[k] + delta[k];
    const double ss_trial = evaluate(model, trial, xs, ys, r_trial, nullptr);
    if (ss_trial < ss) {
      double step = 0.0, scale = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        step += delta[k] * delta[k];
        scale += p[k] * p[k];
      }
      p = trial;
      ss = evaluate(model, p, xs, ys, r, &jac);
      mu = std::max(mu / 10.0, 1e-20);
      need_jacobian_checks = true;
      if (std::sqrt(step) <= options.step_tolerance * (std::sqrt(scale) + options.step_tolerance)) {
        converged = true;
        break;
      }
    } else {
      mu *= 10.0;
      if (mu > 1e30) {
        converged = cosine <= options.stall_gradient_tolerance;
        break;
      }
    }
  }

  fit.params = p;
  fit.residual_norm = std::sqrt(ss);
  fit.converged = converged;
  fit.iterations = iter;
  fill_r2(fit, model, xs, ys);
  return fit;
}

FitResult fit_exp_single(std::span<const double> xs, std::span<const double> ys, const LmOptions& options) {
  require_same_length(xs, ys);
  if (xs.size() < 4) throw Error(ErrorKind::DegenerateInput, "single-exponential fit needs at least 4 points");
  const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
  const double ymin = *ymin_it, ymax = *ymax_it;
  if (ymin == ymax) throw Error(ErrorKind::DegenerateInput, "cannot fit an exponential to constant data");
  const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
  const double xrange = *xmax_it - *xmin_it;
  if (!(xrange > 0.0)) throw Error(ErrorKind::DegenerateInput, "all xs are equal");

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] - ymin > 0.0) {
      lx.push_back(xs[i]);
      ly.push_back(std::log(ys[i] - ymin));
    }
  }
  double b0 = ymax - ymin, d0 = xrange;
  bool have_guess = false;
  if (lx.size() >= 2 && std::adjacent_find(lx.begin(), lx.end(), std::not_equal_to<>()) != lx.end()) {
    const FitResult guess = linear_fit(lx, ly);
    const double slope = guess.params[0];
    if (slope < 0.0) {
      d0 = -1.0 / slope;
      b0 = std::exp(guess.params[1]);
      have_guess = true;
    }
  }
  if (!have_guess && ys[static_cast<std::size_t>(xmin_it - xs.begin())] < ymax) b0 = -b0;

  return levenberg_marquardt(single_exp_model, xs, ys, {b0, d0, ymin}, {"B", "D", "A"}, options);
}

FitResult fit_exp_double(std::span<const double> xs, std::span<const double> ys, const LmOptions& options) {
  require_same_length(xs, ys);
  if (xs.size() < 6) throw Error(ErrorKind::DegenerateInput, "double-exponential fit needs at least 6 points");
  const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
  const double xrange = *xmax_it - *xmin_it;
  if (!(xrange > 0.0)) throw Error(ErrorKind::DegenerateInput, "all xs are equal");

  std::vector<std::array<double, 4>> starts;
  const std::array<double, 5> decades{1e-3, 1e-2, 1e-1, 1.0, 10.0};
  for (std::size_t a = 0; a < decades.size(); ++a) {
    for (std::size_t b = a + 1; b < decades.size(); ++b) {
      const double d1 = decades[a] * xrange, d2 = decades[b] * xrange;
      // Amplitudes by linear least squares for the fixed decay lengths.
      double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e1 = std::exp(-xs[i] / d1), e2 = std::exp(-xs[i] / d2);
        s11 += e1 * e1;
        s12 += e1 * e2;
        s22 += e2 * e2;
        t1 += e1 * ys[i];
        t2 += e2 * ys[i];
      }
      const double det = s11 * s22 - s12 * s12;
      if (!(std::abs(det) > 1e-300) || !std::isfinite(det)) continue;
      starts.push_back({(t1 * s22 - t2 * s12) / det, d1, (t2 * s11 - t1 * s12) / det, d2});
    }
  }
  try {
    const FitResult single = fit_exp_single(xs, ys, options);
    if (std::isfinite(single.residual_norm) && single.params[1] > 0.0)
      starts.push_back({single.params[0], single.params[1], single.params[2], 1e3 * xrange});
  } catch (const Error&) {
    // constant data: the decade starts still apply
  }

  FitResult best;
  bool have_best = false;
  for (const auto& s : starts) {
    FitResult fit = levenberg_marquardt(double_exp_log_model, xs, ys, {s[0], std::log(s[1]), s[2], std::log(s[3])},
                                        {"B1", "D1", "B2", "D2"}, options);
    fit.params[1] = std::exp(fit.params[1]);
    fit.params[3] = std::exp(fit.params[3]);
    if (!std::isfinite(fit.residual_norm)) continue;
    for (double v : fit.params) {
      if (!std::isfinite(v)) fit.converged = false;
    }
    const bool better = !have_best || (fit.converged && !best.converged) ||
                        (fit.converged == best.converged && fit.residual_norm < best.residual_norm);
    if (better) {
      best = std::move(fit);
      have_best = true;
    }
  }
  if (!have_best) {
    best.names = {"B1", "D1", "B2", "D2"};
    best.params = {0.0, 1.0, 0.0, 1.0};
    best.residual_norm = std::numeric_limits<double>::infinity();
    best.r2 = -std::numeric_limits<double>::infinity();
    best.converged = false;
    return best;
  }
  if (best.params[1] > best.params[3]) {
    std::swap(best.params[0], best.params[2]);
    std::swap(best.params[1], best.params[3]);
  }
  return best;
}

FitResult linear_fit(std::span<const double> xs, std::span<const double> ys) {
  require_same_length(xs, ys);
  const std::size_t n = xs.size();
  if (n < 2) throw Error(ErrorKind::DegenerateInput, "linear fit needs at least 2 points");
  const double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateInput, "linear fit needs at least two distinct xs");
  FitResult fit;
  fit.names = {"slope", "intercept"};
  const double slope = sxy / sxx;
  fit.params = {slope, ym - slope * xm};
  std::vector<double> fitted(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fitted[i] = fit.params[0] * xs[i] + fit.params[1];
    ss += (ys[i] - fitted[i]) * (ys[i] - fitted[i]);
  }
  fit.residual_norm = std::sqrt(ss);
  fit.r2 = coefficient_of_determination(ys, fitted);
  fit.converged = true;
  return fit;
}

PeakEstimate locate_peak(std::span<const double> xs, std::span<const double> ys) {
  require_same_length(xs, ys);
  if (xs.empty()) throw Error(ErrorKind::DegenerateInput, "peak search needs at least one point");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw Error(ErrorKind::DegenerateInput, "xs must be strictly increasing");
  }
  std::size_t k = 0;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    if (ys[i] > ys[k]) k = i;
  }
  if (k == 0 || k + 1 == ys.size()) return {xs[k], ys[k], false};

  const double h0 = xs[k - 1] - xs[k], h2 = xs[k + 1] - xs[k];
  const double d0 = ys[k - 1] - ys[k], d2 = ys[k + 1] - ys[k];
  const double det = h0 * h2 * (h0 - h2);
  const double a = (d0 * h2 - d2 * h0) / det;
  const double b = (h0 * h0 * d2 - h2 * h2 * d0) / det;
  if (!(a < 0.0)) return {xs[k], ys[k], true};
  return {xs[k] - b / (2.0 * a), ys[k] - b * b / (4.0 * a), true};
}

PeakEstimate find_interior_max(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 5) throw Error(ErrorKind::DegenerateInput, "peak search needs at least 5 points");
  return locate_peak(xs, ys);
}

}  // namespace anderson
