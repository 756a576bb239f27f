#include "annc/constructions.hpp"

#include <cmath>
#include <string>

namespace annc {

namespace {

double clip_scalar(double u, double v, double x) { return std::max(u, std::min(x, v)); }

// The 13-parameter exact two-input maximum: max{x1,x2} =
// relu(x1-x2) + relu(x2) - relu(-x2).
Network max2_net() {
  Matrix w1(3, 2, {1.0, -1.0, 0.0, 1.0, 0.0, -1.0});
  Matrix w2(1, 3, {1.0, 1.0, -1.0});
  std::vector<AffineLayer> layers;
  layers.emplace_back(std::move(w1), Vec{0.0, 0.0, 0.0});
  layers.emplace_back(std::move(w2), Vec{0.0});
  return Network(std::move(layers));
}

}  // namespace

Grid1D::Grid1D(Vec knots_in, Vec values_in) : knots(std::move(knots_in)), values(std::move(values_in)) {
  if (knots.size() != values.size())
    throw ShapeError("Grid1D: " + std::to_string(knots.size()) + " knots but " +
                     std::to_string(values.size()) + " values");
  if (knots.size() < 2) throw ShapeError("Grid1D: needs at least two knots");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i - 1] < knots[i]))
      throw ShapeError("Grid1D: knots must be strictly increasing (violated at index " +
                       std::to_string(i) + ")");
}

Network build_clip(double u, double v, std::int64_t n) {
  if (v < u) throw std::invalid_argument("build_clip: v < u");
  if (n < 1) throw std::invalid_argument("build_clip: n must be >= 1");
  // Componentwise min-then-max: x -> relu(v - x) -> relu((v-u) - .) -> . + u.
  Matrix w1(n, n), w2(n, n), w3(n, n);
  Vec b1(static_cast<std::size_t>(n), v), b2(static_cast<std::size_t>(n), v - u),
      b3(static_cast<std::size_t>(n), u);
  for (std::int64_t i = 0; i < n; ++i) {
    w1(i, i) = -1.0;
    w2(i, i) = -1.0;
    w3(i, i) = 1.0;
  }
  std::vector<AffineLayer> layers;
  layers.emplace_back(std::move(w1), std::move(b1));
  layers.emplace_back(std::move(w2), std::move(b2));
  layers.emplace_back(std::move(w3), std::move(b3));
  return Network(std::move(layers));
}

Network build_interpolation(const Grid1D& grid) {
  const std::int64_t n_knots = static_cast<std::int64_t>(grid.knots.size());
  const std::int64_t segments = n_knots - 1;
  Matrix w1(n_knots, 1);
  Vec b1(static_cast<std::size_t>(n_knots));
  for (std::int64_t k = 0; k < n_knots; ++k) {
    w1(k, 0) = 1.0;
    b1[static_cast<std::size_t>(k)] = -grid.knots[static_cast<std::size_t>(k)];
  }
  // Output weights are the slope increments; they telescope to the chord
  // slope on each segment and to zero outside the grid.
  Vec slopes(static_cast<std::size_t>(segments));
  for (std::int64_t s = 0; s < segments; ++s)
    slopes[static_cast<std::size_t>(s)] =
        (grid.values[static_cast<std::size_t>(s + 1)] - grid.values[static_cast<std::size_t>(s)]) /
        (grid.knots[static_cast<std::size_t>(s + 1)] - grid.knots[static_cast<std::size_t>(s)]);
  Matrix w2(1, n_knots);
  w2(0, 0) = slopes.front();
  for (std::int64_t k = 1; k < segments; ++k)
    w2(0, k) = slopes[static_cast<std::size_t>(k)] - slopes[static_cast<std::size_t>(k - 1)];
  w2(0, segments) = -slopes.back();
  std::vector<AffineLayer> layers;
  layers.emplace_back(std::move(w1), std::move(b1));
  layers.emplace_back(std::move(w2), Vec{grid.values.front()});
  return Network(std::move(layers));
}

Grid1D build_grid_loclip(const Function1D& fn, double R, double eps) {
  if (!(fn.lip_c > 0.0)) throw std::invalid_argument("build_grid_loclip: lip_c must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("build_grid_loclip: eps must be positive");
  if (!(R > 0.0)) throw std::invalid_argument("build_grid_loclip: R must be positive");
  const double step = eps / (2.0 * fn.lip_c * std::pow(1.0 + 2.0 * R, fn.lip_a));
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("build_grid_loclip: degenerate knot spacing");
  // Smallest N >= 1 with N*step >= R, probed in the same float arithmetic
  // used to place the knots.
  std::int64_t N = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(R / step)));
  while (static_cast<double>(N) * step < R) ++N;
  while (N > 1 && static_cast<double>(N - 1) * step >= R) --N;

  Vec knots, values;
  knots.reserve(static_cast<std::size_t>(2 * N + 1));
  values.reserve(static_cast<std::size_t>(2 * N + 1));
  for (std::int64_t n = -N; n <= N; ++n) {
    const double xi = clip_scalar(-R, R, static_cast<double>(n) * step);
    knots.push_back(xi);
    values.push_back(fn.eval(xi));
  }
  return Grid1D(std::move(knots), std::move(values));
}

Network build_loclip_1d(const Function1D& fn, double R, double eps) {
  if (fn.lip_c == 0.0) return affine_scalar(0.0, fn.eval(0.0));
  return build_interpolation(build_grid_loclip(fn, R, eps));
}

Network build_max(std::int64_t d) {
  if (d < 1) throw std::invalid_argument("build_max: d must be >= 1");
  if (d == 1) return identity_net(1);
  if (d == 2) return max2_net();
  if (d % 2 == 0) {
    std::vector<Network> blocks;
    blocks.reserve(static_cast<std::size_t>(d / 2));
    for (std::int64_t i = 0; i < d / 2; ++i) blocks.push_back(max2_net());
    return compose(build_max(d / 2), parallelize_equal(std::move(blocks)));
  }
  std::vector<Network> blocks;
  blocks.reserve(static_cast<std::size_t>((d + 1) / 2));
  for (std::int64_t i = 0; i < (d - 1) / 2; ++i) blocks.push_back(max2_net());
  blocks.push_back(identity_net(1));
  return compose(build_max((d + 1) / 2), parallelize_equal(std::move(blocks)));
}

Network build_running_max(std::int64_t d) {
  if (d < 1) throw std::invalid_argument("build_running_max: d must be >= 1");
  // Replicate prefixes into d blocks of width d (padding block i with x_i),
  // then take the maximum of every block.
  Matrix a(d * d, d);
  for (std::int64_t block = 0; block < d; ++block)
    for (std::int64_t j = 0; j < d; ++j) a(block * d + j, std::min(j, block)) = 1.0;
  std::vector<Network> blocks;
  blocks.reserve(static_cast<std::size_t>(d));
  for (std::int64_t i = 0; i < d; ++i) blocks.push_back(build_max(d));
  return compose(parallelize_equal(std::move(blocks)),
                 affine_net(std::move(a), Vec(static_cast<std::size_t>(d * d), 0.0)));
}

std::int64_t square01_length(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("square01_length: eps must be positive");
  // Smallest L with 4^{-L} <= eps; multiplying by 4 is exact in IEEE.
  std::int64_t L = 0;
  double acc = eps;
  while (acc < 1.0) {
    acc *= 4.0;
    ++L;
  }
  return std::max<std::int64_t>(2, L);
}

Network build_square01(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("build_square01: eps must be positive");
  const std::int64_t L = square01_length(eps);
  // Sawtooth composition: hidden layer k holds relu(s, s-1/2, s-1, carry)
  // where s is the k-th sawtooth level and the carry accumulates
  // x - sum_j s_j / 4^j, the piecewise-linear interpolant of x^2.
  std::vector<AffineLayer> layers;
  layers.reserve(static_cast<std::size_t>(L));
  Matrix w1(4, 1, {1.0, 1.0, 1.0, 1.0});
  layers.emplace_back(std::move(w1), Vec{0.0, -0.5, -1.0, 0.0});
  for (std::int64_t k = 2; k <= L - 1; ++k) {
    const double scale = std::pow(4.0, -static_cast<double>(k - 1));
    Matrix w(4, 4,
             {2.0, -4.0, 2.0, 0.0,
              2.0, -4.0, 2.0, 0.0,
              2.0, -4.0, 2.0, 0.0,
              -2.0 * scale, 4.0 * scale, -2.0 * scale, 1.0});
    layers.emplace_back(std::move(w), Vec{0.0, -0.5, -1.0, 0.0});
  }
  const double scale = std::pow(4.0, -static_cast<double>(L - 1));
  Matrix w_out(1, 4, {-2.0 * scale, 4.0 * scale, -2.0 * scale, 1.0});
  layers.emplace_back(std::move(w_out), Vec{0.0});
  return Network(std::move(layers));
}

Network build_square(double R, double eps) {
  if (!(R > 0.0)) throw std::invalid_argument("build_square: R must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("build_square: eps must be positive");
  // R^2 * g(|x| / R) with g the unit-interval square network.
  Network g = build_square01(eps / (R * R));
  Matrix fold(2, 1, {1.0 / R, -1.0 / R});
  std::vector<AffineLayer> abs_layers;
  abs_layers.emplace_back(std::move(fold), Vec{0.0, 0.0});
  abs_layers.emplace_back(Matrix(1, 2, {1.0, 1.0}), Vec{0.0});
  Network abs_over_r = Network(std::move(abs_layers));
  return compose(compose(affine_scalar(R * R, 0.0), std::move(g)), std::move(abs_over_r));
}

Network build_prod2(double R, double eps) {
  if (!(R > 0.0) || !(eps > 0.0)) throw std::invalid_argument("build_prod2: R and eps must be positive");
  // Polarization: xy = ((x+y)^2 - x^2 - y^2) / 2 with three shared square
  // networks on [-2R, 2R], each within 2 eps / 3.
  Network g = build_square(2.0 * R, 2.0 * eps / 3.0);
  std::vector<Network> triple;
  triple.push_back(g);
  triple.push_back(g);
  triple.push_back(std::move(g));
  Network stacked = parallelize_equal(std::move(triple));
  Network head = compose(affine_net(Matrix(1, 3, {0.5, -0.5, -0.5}), Vec{0.0}), std::move(stacked));
  Matrix spread(3, 2, {1.0, 1.0, 1.0, 0.0, 0.0, 1.0});
  return compose(std::move(head), affine_net(std::move(spread), Vec{0.0, 0.0, 0.0}));
}

Network build_pairwise_prod(std::int64_t d, double R, double eps) {
  if (d < 1) throw std::invalid_argument("build_pairwise_prod: d must be >= 1");
  if (!(R > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("build_pairwise_prod: R and eps must be positive");
  Network block = build_prod2(R, eps / std::sqrt(static_cast<double>(d)));
  std::vector<Network> blocks(static_cast<std::size_t>(d), block);
  return parallelize_equal(std::move(blocks));
}

Network build_prod_pow2(std::int64_t k, double R, double eps) {
  if (k < 1) throw std::invalid_argument("build_prod_pow2: k must be >= 1");
  if (!(R > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("build_prod_pow2: R and eps must be positive");
  // Level i halves the factor count; its tolerance covers the downstream
  // Lipschitz amplification 2^{5(k-i)/2} R^{2^k - 2^i}.
  std::vector<Network> chain;  // outermost first
  for (std::int64_t i = k; i >= 1; --i) {
    const double level_radius = std::pow(R, std::exp2(static_cast<double>(i - 1)));
    const double level_eps = std::exp2(2.5 * static_cast<double>(i - k)) *
                             std::pow(R, std::exp2(static_cast<double>(i)) -
                                             std::exp2(static_cast<double>(k))) *
                             eps / static_cast<double>(k);
    if (!std::isfinite(level_radius) || !(level_eps > 0.0) || !std::isfinite(level_eps))
      throw std::invalid_argument("build_prod_pow2: level tolerance under/overflows for k=" +
                                  std::to_string(k) + ", R=" + std::to_string(R));
    chain.push_back(build_pairwise_prod(std::int64_t{1} << (k - i), level_radius, level_eps));
  }
  if (chain.size() == 1) return std::move(chain.front());
  return compose_chain_with_identities(std::move(chain));
}

std::int64_t ceil_log2(std::int64_t d) {
  if (d < 1) throw std::invalid_argument("ceil_log2: d must be >= 1");
  std::int64_t k = 0;
  while ((std::int64_t{1} << k) < d) ++k;
  return k;
}

Network build_prod(std::int64_t d, double R, double eps) {
  if (d < 1) throw std::invalid_argument("build_prod: d must be >= 1");
  if (!(R >= 1.0)) throw std::invalid_argument("build_prod: R must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("build_prod: eps must be positive");
  if (d == 1) return affine_net(Matrix::identity(1), Vec{0.0});
  const std::int64_t k = ceil_log2(d);
  const std::int64_t padded = std::int64_t{1} << k;
  Matrix a(padded, d);
  Vec b(static_cast<std::size_t>(padded), 0.0);
  for (std::int64_t i = 0; i < padded; ++i) {
    if (i < d)
      a(i, i) = 1.0;
    else
      b[static_cast<std::size_t>(i)] = 1.0;
  }
  return compose(build_prod_pow2(k, R, eps), affine_net(std::move(a), std::move(b)));
}

namespace {

// Prefix products on [-1,1]^d to within eps: replicate prefixes into blocks
// of width d padded with ones, then apply a d-factor product to each block.
Network running_prod_unit(std::int64_t d, double eps) {
  Network prod = build_prod(d, 1.0, eps / std::sqrt(static_cast<double>(d)));
  Matrix a(d * d, d);
  Vec b(static_cast<std::size_t>(d * d), 0.0);
  for (std::int64_t block = 0; block < d; ++block)
    for (std::int64_t j = 0; j < d; ++j) {
      if (j <= block)
        a(block * d + j, j) = 1.0;
      else
        b[static_cast<std::size_t>(block * d + j)] = 1.0;
    }
  std::vector<Network> blocks(static_cast<std::size_t>(d), std::move(prod));
  return compose(parallelize_equal(std::move(blocks)), affine_net(std::move(a), std::move(b)));
}

}  // namespace

Network build_running_prod_clipped(std::int64_t d, double R, double eps) {
  if (d < 1) throw std::invalid_argument("build_running_prod_clipped: d must be >= 1");
  if (!(R >= 1.0)) throw std::invalid_argument("build_running_prod_clipped: R must be >= 1");
  if (!(eps > 0.0) || !(eps <= 1.0))
    throw std::invalid_argument("build_running_prod_clipped: eps must be in (0, 1]");
  std::vector<Network> chain;
  chain.push_back(running_prod_unit(d, eps / 2.0));
  chain.push_back(build_clip(-1.0, 1.0, d));
  return compose_chain_with_identities(std::move(chain));
}

Network build_componentwise(const std::vector<Function1D>& fns, double R, double eps) {
  if (fns.empty()) throw std::invalid_argument("build_componentwise: needs at least one function");
  if (!(R >= 1.0)) throw std::invalid_argument("build_componentwise: R must be >= 1");
  if (!(eps > 0.0) || !(eps <= 1.0))
    throw std::invalid_argument("build_componentwise: eps must be in (0, 1]");
  const double per_coord = eps / std::sqrt(static_cast<double>(fns.size()));
  std::vector<Network> nets;
  nets.reserve(fns.size());
  for (const auto& fn : fns) nets.push_back(build_loclip_1d(fn, R, per_coord));
  return parallelize_varlen(nets);
}

}  // namespace annc
