#include <doctest.h>

#include <cmath>

#include "annc/algebra.hpp"
#include "annc/network.hpp"
#include "annc/serialize.hpp"
#include "annc/verify.hpp"
#include "oracles.hpp"

using namespace annc;

TEST_CASE("dims of the named fixtures") {
  CHECK(dims(identity_net(1)) == std::vector<std::int64_t>{1, 2, 1});
  CHECK(dims(oracle::figure1_network()) == std::vector<std::int64_t>{3, 6, 3, 1});
  Matrix w(2, 5);
  CHECK(dims(affine_net(std::move(w), Vec(2, 0.0))) == std::vector<std::int64_t>{5, 2});
}

TEST_CASE("param_count matches the layer sums") {
  CHECK(param_count(oracle::figure1_network()) == 49);
  CHECK(param_count(identity_net(2)) == 22);  // 4d^2 + 3d at d = 2
  CHECK(param_count(affine_net(Matrix(1, 1, {3.0}), Vec{1.0})) == 2);

  // Independent recount: sum dim_at(k) * (dim_at(k-1) + 1).
  Rng rng(101);
  for (int rep = 0; rep < 20; ++rep) {
    const Network net = oracle::random_network(rng, 1 + rng.next() % 3, 1 + rng.next() % 3, 1 + rng.next() % 4);
    std::int64_t recount = 0;
    for (std::int64_t k = 1; k <= net.length(); ++k)
      recount += dim_at(net, k) * (dim_at(net, k - 1) + 1);
    CHECK(param_count(net) == recount);
  }
}

TEST_CASE("dim_at vanishes beyond the last layer") {
  const Network net = oracle::figure1_network();
  CHECK(dim_at(net, 0) == 3);
  CHECK(dim_at(net, 1) == 6);
  CHECK(dim_at(net, 3) == 1);
  CHECK(dim_at(net, 4) == 0);
  CHECK(dim_at(net, 17) == 0);
}

TEST_CASE("realize: fixtures and edge cases") {
  const Network fig1 = oracle::figure1_network();
  // Hand propagation of (1,-2,3): layer1 relu -> (1,0,0,2,3,0),
  // layer2 relu -> (1,2,3), output 6; equals the l1-norm oracle.
  const Vec y = realize(fig1, Vec{1.0, -2.0, 3.0});
  CHECK(y.size() == 1);
  CHECK(y[0] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(y[0] == doctest::Approx(oracle::l1_norm(Vec{1.0, -2.0, 3.0})).epsilon(1e-15));

  const Network id3 = identity_net(3);
  const Vec id_out = realize(id3, Vec{-1.0, 0.0, 2.0});
  CHECK(id_out == Vec{-1.0, 0.0, 2.0});

  // Single-layer networks apply no activation.
  const Network aff = affine_net(Matrix(1, 2, {1.0, 1.0}), Vec{-5.0});
  CHECK(realize(aff, Vec{1.0, 1.0})[0] == -3.0);

  CHECK_THROWS_AS(realize(fig1, Vec{1.0, 2.0}), ShapeError);
}

TEST_CASE("realize is deterministic and pure") {
  Rng rng(7);
  const Network net = oracle::random_network(rng, 3, 2, 3);
  const Vec x{0.25, -1.5, 0.75};
  const Vec a = realize(net, x);
  const Vec b = realize(net, x);
  CHECK(a == b);  // bitwise
  const auto batch = realize_many(net, Activation::relu(), {x, x, x});
  for (const auto& out : batch) CHECK(out == a);
}

TEST_CASE("realize is continuous: perturbation bounded by operator norms") {
  Rng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const Network net = oracle::random_network(rng, 3, 2, 3);
    double norm_product = 1.0;
    for (const auto& layer : net.layers()) {
      double frob = 0.0;
      for (double v : layer.weights.data()) frob += v * v;
      norm_product *= std::sqrt(frob);
    }
    Vec x(3), delta(3);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    double delta_norm = 0.0;
    for (auto& v : delta) {
      v = rng.uniform(-1e-9, 1e-9);
      delta_norm += v * v;
    }
    delta_norm = std::sqrt(delta_norm);
    Vec moved = x;
    for (std::size_t i = 0; i < x.size(); ++i) moved[i] += delta[i];
    const double change = oracle::euclid(realize(net, x), realize(net, moved));
    CHECK(change <= norm_product * delta_norm * (1.0 + 1e-9) + 1e-30);
  }
}

TEST_CASE("custom and identity activations") {
  // One hidden layer, weights 1, so the activation is directly visible.
  std::vector<AffineLayer> layers;
  layers.emplace_back(Matrix(1, 1, {1.0}), Vec{0.0});
  layers.emplace_back(Matrix(1, 1, {1.0}), Vec{0.0});
  const Network net{std::move(layers)};
  CHECK(realize(net, Activation::identity(), Vec{-2.0})[0] == -2.0);
  CHECK(realize(net, Activation::relu(), Vec{-2.0})[0] == 0.0);
  const auto softplus = Activation::custom([](double t) { return std::log1p(std::exp(t)); });
  CHECK(realize(net, softplus, Vec{0.0})[0] == doctest::Approx(std::log(2.0)));
}

TEST_CASE("layer and network invariants are enforced") {
  CHECK_THROWS_AS(AffineLayer(Matrix(2, 2), Vec{1.0}), ShapeError);
  CHECK_THROWS_AS(AffineLayer(Matrix(1, 1, {std::nan("")}), Vec{0.0}), ShapeError);
  std::vector<AffineLayer> mismatched;
  mismatched.emplace_back(Matrix(2, 3), Vec(2, 0.0));
  mismatched.emplace_back(Matrix(1, 5), Vec(1, 0.0));
  CHECK_THROWS_AS(Network(std::move(mismatched)), ShapeError);
  CHECK_THROWS_AS(Network(std::vector<AffineLayer>{}), ShapeError);
}

TEST_CASE("JSON round trip is bit exact") {
  Rng rng(33);
  for (int rep = 0; rep < 10; ++rep) {
    const Network net = oracle::random_network(rng, 2, 2, 2);
    const Network back = from_json(to_json(net));
    REQUIRE(back.length() == net.length());
    for (std::int64_t k = 0; k < net.length(); ++k) {
      CHECK(back.layer(k).weights.data() == net.layer(k).weights.data());
      CHECK(back.layer(k).bias == net.layer(k).bias);
    }
  }
  // Awkward values survive.
  const Network net = affine_net(Matrix(1, 3, {0.1, 1e-300, -3.0000000000000004}), Vec{2.2250738585072014e-308});
  const Network back = from_json(to_json(net));
  CHECK(back.layer(0).weights.data() == net.layer(0).weights.data());
  CHECK(back.layer(0).bias == net.layer(0).bias);
}

TEST_CASE("JSON parse errors carry context") {
  CHECK_THROWS_AS(from_json("{"), ParseError);
  CHECK_THROWS_AS(from_json("{\"layers\":[]}"), ParseError);
  CHECK_THROWS_AS(from_json("{\"layers\":[{\"weights\":[[1],[2,3]],\"bias\":[0,0]}]}"), ParseError);
  CHECK_THROWS_AS(from_json("{\"layers\":[{\"weights\":[[1]],\"bias\":[0,0]}]}"), ParseError);
  CHECK_THROWS_AS(from_json("{\"layers\":[{\"weights\":[[\"x\"]],\"bias\":[0]}]}"), ParseError);
}
