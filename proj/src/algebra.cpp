#include "annc/algebra.hpp"

#include <cmath>
#include <utility>

namespace annc {

namespace {

// Merged layer (W_f1 * W_gL, W_f1 * B_gL + B_f1) shared by all four cases of
// the composition formula.
AffineLayer merge_boundary(const AffineLayer& f_first, const AffineLayer& g_last) {
  Matrix w = f_first.weights.multiply(g_last.weights);
  Vec b = f_first.weights.apply(g_last.bias);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += f_first.bias[i];
  return AffineLayer(std::move(w), std::move(b));
}

Network compose_impl(std::vector<AffineLayer> f_layers, std::vector<AffineLayer> g_layers) {
  std::vector<AffineLayer> out;
  out.reserve(f_layers.size() + g_layers.size() - 1);
  for (std::size_t k = 0; k + 1 < g_layers.size(); ++k) out.push_back(std::move(g_layers[k]));
  out.push_back(merge_boundary(f_layers.front(), g_layers.back()));
  for (std::size_t k = 1; k < f_layers.size(); ++k) out.push_back(std::move(f_layers[k]));
  return Network(std::move(out));
}

void check_composable(const Network& f, const Network& g) {
  if (f.input_dim() != g.output_dim())
    throw ComposeError("compose: I(f) = " + std::to_string(f.input_dim()) +
                       " does not match O(g) = " + std::to_string(g.output_dim()));
}

std::int64_t common_length(const std::vector<Network>& fs) {
  if (fs.empty()) throw ComposeError("parallelize: needs at least one network");
  const std::int64_t L = fs.front().length();
  for (std::size_t j = 1; j < fs.size(); ++j) {
    if (fs[j].length() != L) {
      std::string lengths;
      for (const auto& f : fs) lengths += (lengths.empty() ? "" : ",") + std::to_string(f.length());
      throw ComposeError("parallelize: networks must have equal length, got (" + lengths + ")");
    }
  }
  return L;
}

Network parallelize_equal_impl(const std::vector<Network>& fs) {
  const std::int64_t L = common_length(fs);
  std::vector<AffineLayer> out;
  out.reserve(static_cast<std::size_t>(L));
  for (std::int64_t k = 0; k < L; ++k) {
    std::int64_t rows = 0, cols = 0;
    for (const auto& f : fs) {
      rows += f.layer(k).out_dim();
      cols += f.layer(k).in_dim();
    }
    Matrix w(rows, cols);
    Vec b(static_cast<std::size_t>(rows), 0.0);
    std::int64_t row0 = 0, col0 = 0;
    for (const auto& f : fs) {
      const AffineLayer& block = f.layer(k);
      for (std::int64_t i = 0; i < block.out_dim(); ++i) {
        for (std::int64_t j = 0; j < block.in_dim(); ++j) w(row0 + i, col0 + j) = block.weights(i, j);
        b[static_cast<std::size_t>(row0 + i)] = block.bias[static_cast<std::size_t>(i)];
      }
      row0 += block.out_dim();
      col0 += block.in_dim();
    }
    out.emplace_back(std::move(w), std::move(b));
  }
  return Network(std::move(out));
}

}  // namespace

Network compose(const Network& f, const Network& g) {
  check_composable(f, g);
  return compose_impl(f.layers(), g.layers());
}

Network compose(Network&& f, Network&& g) {
  check_composable(f, g);
  return compose_impl(std::move(f).take_layers(), std::move(g).take_layers());
}

Network parallelize_equal(const std::vector<Network>& fs) { return parallelize_equal_impl(fs); }

Network parallelize_equal(std::vector<Network>&& fs) {
  Network out = parallelize_equal_impl(fs);
  fs.clear();
  return out;
}

Network identity_net(std::int64_t d) {
  if (d < 1) throw ShapeError("identity_net: d must be >= 1");
  // Block-diagonal stack of d copies of the width-2 scalar identity.
  Matrix w1(2 * d, d);
  Vec b1(static_cast<std::size_t>(2 * d), 0.0);
  Matrix w2(d, 2 * d);
  Vec b2(static_cast<std::size_t>(d), 0.0);
  for (std::int64_t i = 0; i < d; ++i) {
    w1(2 * i, i) = 1.0;
    w1(2 * i + 1, i) = -1.0;
    w2(i, 2 * i) = 1.0;
    w2(i, 2 * i + 1) = -1.0;
  }
  std::vector<AffineLayer> layers;
  layers.emplace_back(std::move(w1), std::move(b1));
  layers.emplace_back(std::move(w2), std::move(b2));
  return Network(std::move(layers));
}

Network affine_net(Matrix w, Vec b) {
  std::vector<AffineLayer> layers;
  layers.emplace_back(std::move(w), std::move(b));
  return Network(std::move(layers));
}

Network affine_scalar(double w, double b) {
  return affine_net(Matrix(1, 1, {w}), Vec{b});
}

Network power(const Network& g, std::int64_t n) {
  if (g.input_dim() != g.output_dim())
    throw ComposeError("power: I(g) = " + std::to_string(g.input_dim()) +
                       " != O(g) = " + std::to_string(g.output_dim()));
  if (n < 0) throw ComposeError("power: exponent must be nonnegative");
  if (n == 0) return affine_net(Matrix::identity(g.output_dim()), Vec(static_cast<std::size_t>(g.output_dim()), 0.0));
  Network acc = g;
  for (std::int64_t k = 1; k < n; ++k) acc = compose(g, std::move(acc));
  return acc;
}

Network extend(const Network& f, const ExtensionConfig& cfg) {
  const Network& pad = cfg.padding_net;
  if (pad.hidden_length() != 1)
    throw ComposeError("extend: padding net must have exactly one hidden layer, has " +
                       std::to_string(pad.hidden_length()));
  if (pad.input_dim() != pad.output_dim())
    throw ComposeError("extend: padding net must satisfy I = O");
  if (f.output_dim() != pad.input_dim())
    throw ComposeError("extend: O(f) = " + std::to_string(f.output_dim()) +
                       " does not match pad I = " + std::to_string(pad.input_dim()));
  if (cfg.target_length < f.length())
    throw ComposeError("extend: target length " + std::to_string(cfg.target_length) +
                       " < L(f) = " + std::to_string(f.length()));
  return compose(power(pad, cfg.target_length - f.length()), f);
}

Network parallelize_varlen(const std::vector<Network>& fs, const std::vector<Network>& pads) {
  if (fs.empty()) throw ComposeError("parallelize_varlen: needs at least one network");
  if (fs.size() != pads.size())
    throw ComposeError("parallelize_varlen: " + std::to_string(fs.size()) + " networks but " +
                       std::to_string(pads.size()) + " pads");
  std::int64_t max_len = 0;
  for (const auto& f : fs) max_len = std::max(max_len, f.length());
  std::vector<Network> extended;
  extended.reserve(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) {
    try {
      extended.push_back(extend(fs[j], ExtensionConfig{max_len, pads[j]}));
    } catch (const ComposeError& e) {
      throw ComposeError("parallelize_varlen: at index " + std::to_string(j) + ": " + e.what());
    }
  }
  return parallelize_equal(std::move(extended));
}

Network parallelize_varlen(const std::vector<Network>& fs) {
  std::vector<Network> pads;
  pads.reserve(fs.size());
  for (const auto& f : fs) pads.push_back(identity_net(f.output_dim()));
  return parallelize_varlen(fs, pads);
}

Network compose_chain_with_identities(std::vector<Network> fs) {
  if (fs.empty()) throw ComposeError("compose_chain_with_identities: empty chain");
  for (std::size_t k = 0; k + 1 < fs.size(); ++k) {
    if (fs[k].input_dim() != fs[k + 1].output_dim())
      throw ComposeError("compose_chain_with_identities: at position " + std::to_string(k) +
                         ": I = " + std::to_string(fs[k].input_dim()) + " vs O = " +
                         std::to_string(fs[k + 1].output_dim()));
  }
  Network acc = std::move(fs.back());
  for (std::size_t k = fs.size() - 1; k-- > 0;) {
    acc = compose(identity_net(acc.output_dim()), std::move(acc));
    acc = compose(std::move(fs[k]), std::move(acc));
  }
  return acc;
}

bool networks_close(const Network& a, const Network& b, double tol) {
  if (a.length() != b.length()) return false;
  for (std::int64_t k = 0; k < a.length(); ++k) {
    const AffineLayer &la = a.layer(k), &lb = b.layer(k);
    if (la.out_dim() != lb.out_dim() || la.in_dim() != lb.in_dim()) return false;
    for (std::size_t i = 0; i < la.weights.data().size(); ++i)
      if (std::fabs(la.weights.data()[i] - lb.weights.data()[i]) > tol) return false;
    for (std::size_t i = 0; i < la.bias.size(); ++i)
      if (std::fabs(la.bias[i] - lb.bias[i]) > tol) return false;
  }
  return true;
}

}  // namespace annc
