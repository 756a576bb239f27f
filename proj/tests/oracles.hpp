// Test-side reference implementations, independent of the network code paths
// they are used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "annc/network.hpp"
#include "annc/verify.hpp"

namespace oracle {

/// Closed-form piecewise-linear interpolant: values at the knots, chords in
/// between, constant tails.
inline double pwl_interp(const std::vector<double>& knots, const std::vector<double>& values,
                         double x) {
  if (x <= knots.front()) return values.front();
  if (x >= knots.back()) return values.back();
  std::size_t hi = 1;
  while (knots[hi] < x) ++hi;
  const double t = (x - knots[hi - 1]) / (knots[hi] - knots[hi - 1]);
  return values[hi - 1] + t * (values[hi] - values[hi - 1]);
}

inline double l1_norm(const annc::Vec& x) {
  double acc = 0.0;
  for (double v : x) acc += std::fabs(v);
  return acc;
}

inline double max_of(const annc::Vec& x) { return *std::max_element(x.begin(), x.end()); }

inline annc::Vec prefix_max(const annc::Vec& x) {
  annc::Vec y(x.size());
  double running = x[0];
  for (std::size_t i = 0; i < x.size(); ++i) {
    running = std::max(running, x[i]);
    y[i] = running;
  }
  return y;
}

inline annc::Vec clipped_prefix_prod(const annc::Vec& x) {
  annc::Vec y(x.size());
  double running = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    running *= std::max(-1.0, std::min(x[i], 1.0));
    y[i] = running;
  }
  return y;
}

inline double product_of(const annc::Vec& x) {
  double acc = 1.0;
  for (double v : x) acc *= v;
  return acc;
}

inline double euclid(const annc::Vec& a, const annc::Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

/// Random network with widths in [1, max_width] and entries in [-2, 2].
inline annc::Network random_network(annc::Rng& rng, std::int64_t in_dim, std::int64_t out_dim,
                                    std::int64_t length, std::int64_t max_width = 4) {
  std::vector<annc::AffineLayer> layers;
  std::int64_t prev = in_dim;
  for (std::int64_t k = 0; k < length; ++k) {
    const std::int64_t width =
        (k + 1 == length) ? out_dim
                          : 1 + static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(max_width));
    annc::Matrix w(width, prev);
    annc::Vec b(static_cast<std::size_t>(width));
    for (auto& v : w.data()) v = rng.uniform(-2.0, 2.0);
    for (auto& v : b) v = rng.uniform(-2.0, 2.0);
    layers.emplace_back(std::move(w), std::move(b));
    prev = width;
  }
  return annc::Network(std::move(layers));
}

/// The l1-norm fixture: dims (3,6,3,1), 49 parameters, realizes
/// |x1| + |x2| + |x3|.
inline annc::Network figure1_network() {
  annc::Matrix w1(6, 3);
  for (std::int64_t i = 0; i < 3; ++i) {
    w1(2 * i, i) = 1.0;
    w1(2 * i + 1, i) = -1.0;
  }
  annc::Matrix w2(3, 6);
  for (std::int64_t i = 0; i < 3; ++i) {
    w2(i, 2 * i) = 1.0;
    w2(i, 2 * i + 1) = 1.0;
  }
  annc::Matrix w3(1, 3, {1.0, 1.0, 1.0});
  std::vector<annc::AffineLayer> layers;
  layers.emplace_back(std::move(w1), annc::Vec(6, 0.0));
  layers.emplace_back(std::move(w2), annc::Vec(3, 0.0));
  layers.emplace_back(std::move(w3), annc::Vec{0.0});
  return annc::Network(std::move(layers));
}

}  // namespace oracle
