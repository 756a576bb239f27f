#pragma once

#include <functional>

#include "annc/algebra.hpp"
#include "annc/network.hpp"

namespace annc {

/// Strictly increasing knots with one value per knot.
struct Grid1D {
  Vec knots;
  Vec values;

  Grid1D(Vec knots_in, Vec values_in);
  std::int64_t segment_count() const { return static_cast<std::int64_t>(knots.size()) - 1; }
};

/// Scalar target with its locally-Lipschitz metadata:
/// |f(x)-f(y)| <= lip_c (1+|x|+|y|)^lip_a |x-y|, |f| <= value_bound.
/// lip_c == 0 marks a constant function.
struct Function1D {
  std::function<double(double)> eval;
  double lip_c = 0.0;
  double lip_a = 0.0;
  double value_bound = 0.0;
};

/// Componentwise clip to [u, v] on R^n.  dims (n,n,n,n), P = 3n^2 + 3n.
Network build_clip(double u, double v, std::int64_t n);

/// Two-layer network realizing the piecewise-linear interpolant of the grid:
/// values at the knots, linear in between, constant beyond the ends.
/// dims (1, N+1, 1).
Network build_interpolation(const Grid1D& grid);

/// Symmetric knot grid xi_n = clip_{-R,R}(n eps / (2 c (1+2R)^a)) for
/// n = -N..N with N minimal such that xi_N = R; values are fn at the knots.
Grid1D build_grid_loclip(const Function1D& fn, double R, double eps);

/// Interpolation network on build_grid_loclip's grid.  Sup error <= eps on
/// [-R,R], globally c(1+2R)^a-Lipschitz, P <= 12 c (1+2R)^a R / eps + 10.
/// A constant target (lip_c == 0) yields the two-parameter affine network.
Network build_loclip_1d(const Function1D& fn, double R, double eps);

/// Exact d-ary maximum via the binary recursion; d = 1 yields the identity
/// network.  L = ceil(log2 d) + 1, P(M_2) = 13,
/// P <= 3d^2 + 18d + 12 ceil(log2 d) - 13/2.
Network build_max(std::int64_t d);

/// Exact prefix-maximum map x -> (x_1, max{x_1,x_2}, ..., max{x_1..x_d});
/// sqrt(d)-Lipschitz, P <= 3d^4 + 30d^3 for d >= 2.
Network build_running_max(std::int64_t d);

/// Approximate square on [0,1]: sup error <= eps, globally 2-Lipschitz,
/// dims (1,4,...,4,1) with L = max{2, ceil(log2(1/eps)/2)},
/// P <= max{13, 10 log2(1/eps) - 7}.
Network build_square01(double eps);

/// Approximate square on [-R,R]: sup error <= eps, globally 2R-Lipschitz,
/// dims (1,2,4,...,4,1), P <= max{21, 20 log2 R - 10 log2 eps + 1}.
Network build_square(double R, double eps);

/// Approximate two-factor product on [-R,R]^2 via the polarization identity
/// xy = ((x+y)^2 - x^2 - y^2)/2; sqrt(32) R-Lipschitz,
/// dims (2,6,12,...,12,1), P <= max{157, 211 + 180 log2 R - 90 log2 eps}.
Network build_prod2(double R, double eps);

/// d independent pairwise products (x_1 x_2, ..., x_{2d-1} x_{2d}); error
/// <= eps in the Euclidean norm on [-R,R]^{2d}, sqrt(32) R-Lipschitz,
/// dims (2d, 6d, 12d, ..., 12d, d).
Network build_pairwise_prod(std::int64_t d, double R, double eps);

/// Product of 2^k factors via a binary tree of pairwise-product stages with
/// identity networks interposed; per-level tolerances shrink geometrically.
/// Lipschitz <= 2^{5k/2} R^{2^k - 1}.
Network build_prod_pow2(std::int64_t k, double R, double eps);

/// Product of d factors on [-R,R]^d (R >= 1): pads the input with ones up to
/// the next power of two and applies the tree.  Lipschitz
/// <= sqrt(32) d^{5/2} R^{2d-1},
/// P <= 1896 d^3 + 720 log2(R) d^3 + 360 max{0, log2(1/eps)} d^2.
Network build_prod(std::int64_t d, double R, double eps);

/// Prefix products of clipped inputs: within eps (Euclidean) of
/// x -> (c_1, c_1 c_2, ..., c_1...c_d) with c_i = clip_{-1,1}(x_i), on all of
/// R^d.  Built as (prefix-product net on [-1,1]^d) . I_d . (clip net);
/// sqrt(32) d^3-Lipschitz, P <= 5315 d^5 / eps.
Network build_running_prod_clipped(std::int64_t d, double R, double eps);

/// Coordinatewise application of fns, each approximated to eps/sqrt(d) by
/// build_loclip_1d and stacked with identity pads; Euclidean error <= eps on
/// [-R,R]^d, Lipschitz <= max_j c_j (1+2R)^{a_j}.
Network build_componentwise(const std::vector<Function1D>& fns, double R, double eps);

/// Smallest k with 2^k >= d (exact integer arithmetic).
std::int64_t ceil_log2(std::int64_t d);

/// Smallest L >= minimum with 4^{-L} <= eps, i.e. L = max{minimum,
/// ceil(log2(1/eps)/2)} computed by exact doubling (never on float logs).
std::int64_t square01_length(double eps);

}  // namespace annc
