#include "anderson/localization.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "anderson/error.hpp"
#include "anderson/fitting.hpp"

namespace anderson {

std::size_t localization_center(const State& s) {
  std::size_t best = 0;
  double best_mag = s.magnitude(0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double m = s.magnitude(i);
    if (m > best_mag) {
      best = i;
      best_mag = m;
    }
  }
  return best;
}

double participation_ratio(const State& s) {
  double acc = 0.0;
  for (const auto& z : s.amplitudes()) {
    const double p = std::norm(z);
    acc += p * p;
  }
  return 1.0 / acc;
}

LocalizationReport localization_length(const State& s, Boundary bc, double floor) {
  const std::size_t n = s.size();
  LocalizationReport report;
  report.center = localization_center(s);
  report.participation_ratio = participation_ratio(s);

  std::vector<double> distance, log_amp;
  distance.reserve(n);
  log_amp.reserve(n);
  std::size_t off_center = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = s.magnitude(i);
    if (!(mag > floor)) continue;
    std::size_t d = i > report.center ? i - report.center : report.center - i;
    if (bc == Boundary::Periodic) d = std::min(d, n - d);
    distance.push_back(static_cast<double>(d));
    log_amp.push_back(std::log(mag));
    if (i != report.center) ++off_center;
  }
  if (off_center < kMinLocalizationSites) {
    throw Error(ErrorKind::InsufficientData, "only " + std::to_string(off_center) +
                                                 " sites above the amplitude floor besides the center");
  }
  const FitResult fit = linear_fit(distance, log_amp);
  const double slope = fit.params[0];
  if (!(slope < 0.0)) throw Error(ErrorKind::NonpositiveSlope, "amplitudes do not decay away from the center");
  report.length = -1.0 / slope;
  report.fit_r2 = fit.r2;
  return report;
}

}  // namespace anderson
