#include "annc/network.hpp"

#include <algorithm>
#include <cmath>

namespace annc {

Matrix Matrix::multiply(const Matrix& other) const {
  if (cols_ != other.rows())
    throw ShapeError("Matrix multiply: " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                     " times " + std::to_string(other.rows()) + "x" + std::to_string(other.cols()));
  Matrix out(rows_, other.cols());
  for (std::int64_t i = 0; i < rows_; ++i) {
    for (std::int64_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::int64_t j = 0; j < other.cols(); ++j) out(i, j) += a * other(k, j);
    }
  }
  return out;
}

Vec Matrix::apply(const Vec& x) const {
  if (static_cast<std::int64_t>(x.size()) != cols_)
    throw ShapeError("Matrix apply: expected input of length " + std::to_string(cols_) +
                     ", got " + std::to_string(x.size()));
  Vec y(static_cast<std::size_t>(rows_), 0.0);
  for (std::int64_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    const double* row = data_.data() + i * cols_;
    for (std::int64_t k = 0; k < cols_; ++k) acc += row[k] * x[static_cast<std::size_t>(k)];
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

AffineLayer::AffineLayer(Matrix w, Vec b) : weights(std::move(w)), bias(std::move(b)) {
  if (static_cast<std::int64_t>(bias.size()) != weights.rows())
    throw ShapeError("AffineLayer: bias length " + std::to_string(bias.size()) +
                     " != weight rows " + std::to_string(weights.rows()));
  for (double v : weights.data())
    if (!std::isfinite(v)) throw ShapeError("AffineLayer: nonfinite weight entry");
  for (double v : bias)
    if (!std::isfinite(v)) throw ShapeError("AffineLayer: nonfinite bias entry");
}

Network::Network(std::vector<AffineLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("Network: needs at least one layer");
  for (std::size_t k = 1; k < layers_.size(); ++k) {
    if (layers_[k].in_dim() != layers_[k - 1].out_dim())
      throw ShapeError("Network: layer " + std::to_string(k) + " expects input of " +
                       std::to_string(layers_[k].in_dim()) + " but layer " +
                       std::to_string(k - 1) + " outputs " +
                       std::to_string(layers_[k - 1].out_dim()));
  }
}

std::vector<std::int64_t> dims(const Network& net) {
  std::vector<std::int64_t> out;
  out.reserve(net.layers().size() + 1);
  out.push_back(net.input_dim());
  for (const auto& layer : net.layers()) out.push_back(layer.out_dim());
  return out;
}

std::int64_t dim_at(const Network& net, std::int64_t n) {
  if (n > net.length()) return 0;
  if (n == 0) return net.input_dim();
  return net.layer(n - 1).out_dim();
}

std::int64_t param_count(const Network& net) {
  std::int64_t total = 0;
  for (const auto& layer : net.layers())
    total += layer.out_dim() * (layer.in_dim() + 1);
  return total;
}

Vec realize(const Network& net, const Activation& activation, const Vec& x) {
  if (static_cast<std::int64_t>(x.size()) != net.input_dim())
    throw ShapeError("realize: expected input of length " + std::to_string(net.input_dim()) +
                     ", got " + std::to_string(x.size()));
  Vec cur = x;
  const std::int64_t L = net.length();
  for (std::int64_t k = 0; k < L; ++k) {
    const AffineLayer& layer = net.layer(k);
    Vec next(static_cast<std::size_t>(layer.out_dim()));
    const double* w = layer.weights.data().data();
    const std::int64_t in = layer.in_dim();
    for (std::int64_t i = 0; i < layer.out_dim(); ++i) {
      double acc = 0.0;
      const double* row = w + i * in;
      for (std::int64_t j = 0; j < in; ++j) acc += row[j] * cur[static_cast<std::size_t>(j)];
      acc += layer.bias[static_cast<std::size_t>(i)];
      next[static_cast<std::size_t>(i)] = (k + 1 < L) ? activation(acc) : acc;
    }
    cur = std::move(next);
  }
  return cur;
}

Vec realize(const Network& net, const Vec& x) { return realize(net, Activation::relu(), x); }

std::vector<Vec> realize_many(const Network& net, const Activation& activation,
                              const std::vector<Vec>& points) {
  // Batched over points; per point the summation order matches realize()
  // except that zero weights are skipped, which can only affect the sign of
  // a zero partial sum.
  std::int64_t max_width = net.input_dim();
  for (const auto& layer : net.layers()) max_width = std::max(max_width, layer.out_dim());

  constexpr std::int64_t kBufferBudget = 1ll << 24;  // doubles per buffer
  const std::int64_t batch =
      std::clamp<std::int64_t>(kBufferBudget / std::max<std::int64_t>(1, max_width), 1, 64);

  std::vector<Vec> results(points.size());
  const std::int64_t L = net.length();
  std::vector<double> cur, next;
  cur.resize(static_cast<std::size_t>(max_width * batch));
  next.resize(static_cast<std::size_t>(max_width * batch));

  for (std::size_t start = 0; start < points.size(); start += static_cast<std::size_t>(batch)) {
    const std::int64_t b_count =
        std::min<std::int64_t>(batch, static_cast<std::int64_t>(points.size() - start));
    const std::int64_t in0 = net.input_dim();
    for (std::int64_t b = 0; b < b_count; ++b) {
      const Vec& p = points[start + static_cast<std::size_t>(b)];
      if (static_cast<std::int64_t>(p.size()) != in0)
        throw ShapeError("realize_many: expected input of length " + std::to_string(in0) +
                         ", got " + std::to_string(p.size()));
      // feature-major layout: cur[j * b_count + b]
      for (std::int64_t j = 0; j < in0; ++j)
        cur[static_cast<std::size_t>(j * b_count + b)] = p[static_cast<std::size_t>(j)];
    }
    for (std::int64_t k = 0; k < L; ++k) {
      const AffineLayer& layer = net.layer(k);
      const std::int64_t in = layer.in_dim(), out = layer.out_dim();
      const double* w = layer.weights.data().data();
      for (std::int64_t i = 0; i < out; ++i) {
        double* acc = next.data() + i * b_count;
        std::fill(acc, acc + b_count, 0.0);
        const double* row = w + i * in;
        for (std::int64_t j = 0; j < in; ++j) {
          const double wij = row[j];
          if (wij == 0.0) continue;
          const double* xj = cur.data() + j * b_count;
          for (std::int64_t b = 0; b < b_count; ++b) acc[b] += wij * xj[b];
        }
        const double bi = layer.bias[static_cast<std::size_t>(i)];
        if (k + 1 < L) {
          for (std::int64_t b = 0; b < b_count; ++b) acc[b] = activation(acc[b] + bi);
        } else {
          for (std::int64_t b = 0; b < b_count; ++b) acc[b] += bi;
        }
      }
      std::swap(cur, next);
    }
    const std::int64_t out_dim = net.output_dim();
    for (std::int64_t b = 0; b < b_count; ++b) {
      Vec y(static_cast<std::size_t>(out_dim));
      for (std::int64_t i = 0; i < out_dim; ++i)
        y[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i * b_count + b)];
      results[start + static_cast<std::size_t>(b)] = std::move(y);
    }
  }
  return results;
}

}  // namespace annc
