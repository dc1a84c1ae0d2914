#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace perclab {

// Point estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;

  double ci_low(double z = 1.96) const { return value - z * se; }
  double ci_high(double z = 1.96) const { return value + z * se; }
};

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

inline Estimate mean_estimate(std::span<const double> xs) {
  double m = mean(xs);
  double v = sample_variance(xs);
  return {m, std::sqrt(v / static_cast<double>(xs.size()))};
}

// Binomial proportion with its exact-variance standard error.
inline Estimate binomial_estimate(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0) throw std::invalid_argument("binomial_estimate: no trials");
  double phat = static_cast<double>(successes) / static_cast<double>(trials);
  return {phat, std::sqrt(phat * (1.0 - phat) / static_cast<double>(trials))};
}

// Welch z statistic for the difference of two sample means.
inline double two_sample_z(std::span<const double> xs, std::span<const double> ys) {
  double mx = mean(xs), my = mean(ys);
  double vx = sample_variance(xs) / static_cast<double>(xs.size());
  double vy = sample_variance(ys) / static_cast<double>(ys.size());
  double denom = std::sqrt(vx + vy);
  if (denom == 0.0) return mx == my ? 0.0 : INFINITY;
  return (mx - my) / denom;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

inline LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("least_squares: need two samples of equal size");
  double mx = mean(xs), my = mean(ys);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(xs.size()));
  return fit;
}

// Total variation distance between two distributions on the same index set.
inline double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

}  // namespace perclab
