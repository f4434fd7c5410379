#include "reserve/sampling.hpp"

#include <cmath>

namespace reserve {
namespace {

constexpr double kPtrsCutoff = 10.0;
constexpr double kInversionMeanCutoff = 30.0;

long long poisson_small(double mean, Engine& rng) {
  const double limit = std::exp(-mean);
  long long k = 0;
  double product = uniform01(rng);
  while (product > limit) {
    ++k;
    product *= uniform01(rng);
  }
  return k;
}

long long poisson_ptrs(double mean, Engine& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform01(rng) - 0.5;
    const double v = uniform01(rng);
    const double us = 0.5 - std::abs(u);
    const auto k = static_cast<long long>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    const double kd = static_cast<double>(k);
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + kd * loglam - std::lgamma(kd + 1.0)) {
      return k;
    }
  }
}

}  // namespace

long long sample_poisson(double mean, Engine& rng) {
  if (!(mean > 0.0)) return 0;
  if (mean < kPtrsCutoff) return poisson_small(mean, rng);
  return poisson_ptrs(mean, rng);
}

long long sample_binomial(long long trials, double p, Engine& rng) {
  if (trials <= 0 || !(p > 0.0)) return 0;
  if (p >= 1.0) return trials;
  if (p > 0.5) return trials - sample_binomial(trials, 1.0 - p, rng);
  if (static_cast<double>(trials) * p >= kInversionMeanCutoff) {
    return std::binomial_distribution<long long>(trials, p)(rng);
  }
  const double q = 1.0 - p;
  const double ratio = p / q;
  const double a = static_cast<double>(trials + 1) * ratio;
  for (;;) {
    double prob = std::pow(q, static_cast<double>(trials));
    double u = uniform01(rng);
    long long x = 0;
    while (u > prob) {
      u -= prob;
      ++x;
      if (x > trials) break;  // rounding residue; redraw
      prob *= a / static_cast<double>(x) - ratio;
    }
    if (x <= trials) return x;
  }
}

}  // namespace reserve
