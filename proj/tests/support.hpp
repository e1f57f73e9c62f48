#pragma once

// Small helpers shared by the test binaries.

#include "amalgam/classifier.hpp"
#include "amalgam/grid.hpp"
#include "amalgam/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace amalgam::test {

inline constexpr double kPi = std::numbers::pi;

inline ReciprocalExponent P(const char* text) { return ReciprocalExponent::parse(text); }

inline GridFunction gaussian(const GridSpec& spec, double x0 = 0.0, double width = 1.0) {
  return GridFunction::sample_space(spec, [=](const std::array<double, 2>& x) {
    double r2 = (x[0] - x0) * (x[0] - x0);
    if (spec.n == 2) r2 += x[1] * x[1];
    return Complex(std::exp(-kPi * r2 / (width * width)), 0.0);
  });
}

/// Sum of a few modulated Gaussians near the origin.
inline GridFunction random_bandlimited(const GridSpec& spec, std::mt19937_64& rng, double max_freq = 4.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto f = GridFunction::zeros(spec);
  for (int t = 0; t < 4; ++t) {
    const double c = 2 * u(rng), w = max_freq * u(rng), a = u(rng), b = u(rng);
    const double width = 0.8 + 0.3 * u(rng);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const auto x = f.coordinates(i);
      const double r = (x[0] - c) / width;
      f.values[i] += Complex(a, b) * std::exp(-kPi * r * r) * std::polar(1.0, 2 * kPi * w * x[0]);
    }
  }
  return f;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

inline WeightedSeq uniform_seq(const std::vector<std::pair<long, Complex>>& entries) {
  WeightedSeq a;
  a.kind = SeqKind::Uniform;
  for (const auto& [k, v] : entries) a.entries.push_back({{k, 0}, v});
  return a;
}

}  // namespace amalgam::test
