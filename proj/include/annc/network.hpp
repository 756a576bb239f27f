#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace annc {

using Vec = std::vector<double>;

/// Thrown when vector/matrix shapes do not line up.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::int64_t rows, std::int64_t cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {
    if (rows < 1 || cols < 1) throw ShapeError("Matrix: dimensions must be positive");
  }
  Matrix(std::int64_t rows, std::int64_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows < 1 || cols < 1) throw ShapeError("Matrix: dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(rows * cols))
      throw ShapeError("Matrix: data size " + std::to_string(data_.size()) + " != " +
                       std::to_string(rows) + "x" + std::to_string(cols));
  }
  static Matrix identity(std::int64_t n) {
    Matrix m(n, n);
    for (std::int64_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }
  double& operator()(std::int64_t i, std::int64_t j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  double operator()(std::int64_t i, std::int64_t j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  /// Row-major product this * other.
  Matrix multiply(const Matrix& other) const;
  Vec apply(const Vec& x) const;

 private:
  std::int64_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

/// One (W, B) pair.  Invariant: bias length equals weight row count, all
/// entries finite.
struct AffineLayer {
  Matrix weights;
  Vec bias;

  AffineLayer() = default;
  AffineLayer(Matrix w, Vec b);

  std::int64_t out_dim() const { return weights.rows(); }
  std::int64_t in_dim() const { return weights.cols(); }
};

/// Nonempty list of affine layers with chained shapes: the column count of
/// layer k+1 equals the row count of layer k.
class Network {
 public:
  explicit Network(std::vector<AffineLayer> layers);

  const std::vector<AffineLayer>& layers() const { return layers_; }
  const AffineLayer& layer(std::int64_t k) const { return layers_[static_cast<std::size_t>(k)]; }

  std::int64_t length() const { return static_cast<std::int64_t>(layers_.size()); }
  std::int64_t hidden_length() const { return length() - 1; }
  std::int64_t input_dim() const { return layers_.front().in_dim(); }
  std::int64_t output_dim() const { return layers_.back().out_dim(); }

  /// Consumes this network's layer storage.  The network must not be used
  /// afterwards; used by the algebra operations to splice large networks
  /// without copying.
  std::vector<AffineLayer> take_layers() && { return std::move(layers_); }

 private:
  std::vector<AffineLayer> layers_;
};

/// Scalar activation applied componentwise between affine layers.
class Activation {
 public:
  static Activation relu() { return Activation(Kind::ReLU, {}); }
  static Activation identity() { return Activation(Kind::Identity, {}); }
  static Activation custom(std::function<double(double)> fn) { return Activation(Kind::Custom, std::move(fn)); }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::ReLU: return x > 0.0 ? x : 0.0;
      case Kind::Identity: return x;
      default: return fn_(x);
    }
  }
  bool is_relu() const { return kind_ == Kind::ReLU; }

 private:
  enum class Kind { ReLU, Identity, Custom };
  Activation(Kind kind, std::function<double(double)> fn) : kind_(kind), fn_(std::move(fn)) {}
  Kind kind_;
  std::function<double(double)> fn_;
};

/// Layer widths (l_0, ..., l_L).
std::vector<std::int64_t> dims(const Network& net);

/// Width of layer n; zero for n beyond the last layer.
std::int64_t dim_at(const Network& net, std::int64_t n);

/// Total parameter count sum_k l_k (l_{k-1} + 1), zeros included.
std::int64_t param_count(const Network& net);

/// Applies W_k . + B_k followed by the componentwise activation on layers
/// 1..L-1 and the bare affine map on layer L.  Evaluation is layer by layer
/// with row-major dot products so results are reproducible bit for bit.
Vec realize(const Network& net, const Activation& activation, const Vec& x);
Vec realize(const Network& net, const Vec& x);  // ReLU

/// Evaluates many points; per-point values agree with realize() up to the
/// sign of zero partial sums.
std::vector<Vec> realize_many(const Network& net, const Activation& activation,
                              const std::vector<Vec>& points);

}  // namespace annc
