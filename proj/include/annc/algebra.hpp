#pragma once

#include "annc/network.hpp"

namespace annc {

/// Thrown when two networks cannot be combined.
class ComposeError : public std::invalid_argument {
 public:
  explicit ComposeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Standard composition f . g (g runs first).  Requires I(f) = O(g).
/// g's last affine map is merged into f's first, so
/// L(f . g) = L(f) + L(g) - 1 and
/// dims(f . g) = (D_0(g), ..., D_{L(g)-1}(g), D_1(f), ..., D_{L(f)}(f)).
Network compose(const Network& f, const Network& g);
Network compose(Network&& f, Network&& g);

/// Block-diagonal stacking of equally long networks.  The realization is the
/// tuple of realizations on the concatenated inputs.
Network parallelize_equal(const std::vector<Network>& fs);
Network parallelize_equal(std::vector<Network>&& fs);

/// Width-2d ReLU network realizing the identity on R^d via
/// x = max{x,0} - max{-x,0}.  dims (d, 2d, d), P = 4d^2 + 3d.
Network identity_net(std::int64_t d);

/// Single-layer network x -> Wx + B.
Network affine_net(Matrix w, Vec b);
Network affine_scalar(double w, double b);  // 1x1 convenience

/// n-fold iterated composition of g with itself; n = 0 yields the plain
/// affine identity on R^{O(g)}.  Requires I(g) = O(g).
Network power(const Network& g, std::int64_t n);

struct ExtensionConfig {
  std::int64_t target_length;
  Network padding_net;  // one hidden layer, I = O
};

/// Length-padding: composes powers of cfg.padding_net on top of f until the
/// total length reaches cfg.target_length.  Leaves f untouched (layerwise)
/// when the target equals L(f).
Network extend(const Network& f, const ExtensionConfig& cfg);

/// Extends every network to the maximum length using the matching pad, then
/// stacks block-diagonally.  pads[j] must satisfy I = O = O(fs[j]) and have
/// exactly one hidden layer.
Network parallelize_varlen(const std::vector<Network>& fs, const std::vector<Network>& pads);

/// Same with the default pads I_{O(fs[j])} (the identity networks).
Network parallelize_varlen(const std::vector<Network>& fs);

/// fs[0] . I . fs[1] . I . ... . I . fs[n-1] with identity networks
/// interposed between consecutive factors; fs[n-1] runs first.
/// P(result) <= 3 sum P(fs[k]) - P(fs[0]) - P(fs[n-1]).
Network compose_chain_with_identities(std::vector<Network> fs);

/// Layerwise shape equality plus entrywise absolute tolerance.
bool networks_close(const Network& a, const Network& b, double tol = 1e-12);

}  // namespace annc
