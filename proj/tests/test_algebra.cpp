#include <doctest.h>

#include <cmath>

#include "annc/algebra.hpp"
#include "annc/constructions.hpp"
#include "annc/verify.hpp"
#include "oracles.hpp"

using namespace annc;

namespace {

Vec random_vec(Rng& rng, std::int64_t n, double radius = 2.0) {
  Vec x(static_cast<std::size_t>(n));
  for (auto& v : x) v = rng.uniform(-radius, radius);
  return x;
}

}  // namespace

TEST_CASE("compose: dims, homomorphism, errors") {
  // M_2 on top of an affine map R^4 -> R^2: the L > 1 = L(g) case.
  const Network m2 = build_max(2);
  Matrix w(2, 4);
  w(0, 0) = 1.0;
  w(1, 3) = -1.0;
  const Network aff = affine_net(std::move(w), Vec{0.5, -0.5});
  const Network composed = compose(m2, aff);
  CHECK(dims(composed) == std::vector<std::int64_t>{4, 3, 1});
  CHECK(composed.length() == m2.length() + aff.length() - 1);

  Rng rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const Vec x = random_vec(rng, 4);
    const Vec inner = realize(aff, x);
    CHECK(realize(composed, x)[0] ==
          doctest::Approx(realize(m2, inner)[0]).epsilon(1e-12));
  }

  // Identity affine head leaves the realization unchanged.
  const Network head = affine_net(Matrix::identity(1), Vec{0.0});
  const Network same = compose(head, m2);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec x = random_vec(rng, 2);
    CHECK(realize(same, x)[0] == doctest::Approx(realize(m2, x)[0]).epsilon(1e-14));
  }

  CHECK_THROWS_AS(compose(m2, build_max(3)), ComposeError);
}

TEST_CASE("compose covers all four length cases") {
  Rng rng(17);
  for (auto [lf, lg] : {std::pair<int, int>{2, 2}, {2, 1}, {1, 2}, {1, 1}}) {
    const Network f = oracle::random_network(rng, 3, 2, lf);
    const Network g = oracle::random_network(rng, 2, 3, lg);
    const Network fg = compose(f, g);
    CHECK(fg.length() == lf + lg - 1);
    CHECK(fg.input_dim() == g.input_dim());
    CHECK(fg.output_dim() == f.output_dim());
    for (int rep = 0; rep < 25; ++rep) {
      const Vec x = random_vec(rng, 2);
      const Vec expect = realize(f, realize(g, x));
      const Vec got = realize(fg, x);
      for (std::size_t i = 0; i < expect.size(); ++i)
        CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-11));
    }
  }
}

TEST_CASE("composition is associative up to float tolerance") {
  Rng rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    const Network f = oracle::random_network(rng, 2, 2, 1 + rng.next() % 3);
    const Network g = oracle::random_network(rng, 3, 2, 1 + rng.next() % 3);
    const Network h = oracle::random_network(rng, 2, 3, 1 + rng.next() % 3);
    CHECK(networks_close(compose(compose(f, g), h), compose(f, compose(g, h)), 1e-12));
  }
}

TEST_CASE("composition parameter identity recounted exactly") {
  Rng rng(29);
  for (int rep = 0; rep < 100; ++rep) {
    const Network f = oracle::random_network(rng, 3, 2, 1 + rng.next() % 3);
    const Network g = oracle::random_network(rng, 2, 3, 1 + rng.next() % 3);
    const Network fg = compose(f, g);
    // P(f . g) = P(f) + P(g) + l_{f,1}(l_{g,L-1} + 1)
    //          - l_{f,1}(l_{f,0} + 1) - l_{g,L}(l_{g,L-1} + 1).
    const std::int64_t expected =
        param_count(f) + param_count(g) + dim_at(f, 1) * (dim_at(g, g.length() - 1) + 1) -
        dim_at(f, 1) * (dim_at(f, 0) + 1) -
        dim_at(g, g.length()) * (dim_at(g, g.length() - 1) + 1);
    CHECK(param_count(fg) == expected);
  }
}

TEST_CASE("hidden length is additive under composition") {
  Rng rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    const Network f = oracle::random_network(rng, 2, 2, 1 + rng.next() % 4);
    const Network g = oracle::random_network(rng, 2, 2, 1 + rng.next() % 4);
    const Network h = oracle::random_network(rng, 2, 2, 1 + rng.next() % 4);
    const Network chain = compose(compose(f, g), h);
    CHECK(chain.hidden_length() == f.hidden_length() + g.hidden_length() + h.hidden_length());
  }
}

TEST_CASE("parallelize_equal: dims sum and tuple realization") {
  const Network m2 = build_max(2);
  const Network stacked = parallelize_equal({m2, m2});
  CHECK(dims(stacked) == std::vector<std::int64_t>{4, 6, 2});

  // P_2(I_1, I_1) is layerwise equal to I_2.
  CHECK(networks_close(parallelize_equal({identity_net(1), identity_net(1)}), identity_net(2), 0.0));

  Rng rng(37);
  for (int rep = 0; rep < 50; ++rep) {
    const Network f1 = oracle::random_network(rng, 2, 2, 2);
    const Network f2 = oracle::random_network(rng, 3, 1, 2);
    const Network par = parallelize_equal({f1, f2});
    const Vec x = random_vec(rng, 2);
    const Vec y = random_vec(rng, 3);
    Vec joint = x;
    joint.insert(joint.end(), y.begin(), y.end());
    const Vec out = realize(par, joint);
    const Vec out1 = realize(f1, x);
    const Vec out2 = realize(f2, y);
    REQUIRE(out.size() == out1.size() + out2.size());
    for (std::size_t i = 0; i < out1.size(); ++i) CHECK(out[i] == doctest::Approx(out1[i]).epsilon(1e-13));
    for (std::size_t i = 0; i < out2.size(); ++i)
      CHECK(out[out1.size() + i] == doctest::Approx(out2[i]).epsilon(1e-13));
  }

  CHECK_THROWS_AS(parallelize_equal({m2, affine_scalar(1.0, 0.0)}), ComposeError);
  CHECK_THROWS_AS(parallelize_equal(std::vector<Network>{}), ComposeError);
}

TEST_CASE("parallelization parameter bounds") {
  Rng rng(41);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<Network> fs;
    const int n = 2 + static_cast<int>(rng.next() % 3);
    double sum_p = 0.0;
    for (int j = 0; j < n; ++j) {
      fs.push_back(oracle::random_network(rng, 1 + rng.next() % 3, 1 + rng.next() % 3, 2));
      sum_p += static_cast<double>(param_count(fs.back()));
    }
    CHECK(static_cast<double>(param_count(parallelize_equal(fs))) <= 0.5 * sum_p * sum_p);
  }
  // Identical dims: P(P_n(f,...,f)) <= n^2 P(f).
  for (int rep = 0; rep < 10; ++rep) {
    const Network f = oracle::random_network(rng, 2, 2, 3);
    const int n = 2 + static_cast<int>(rng.next() % 4);
    const std::vector<Network> fs(static_cast<std::size_t>(n), f);
    CHECK(param_count(parallelize_equal(fs)) <=
          static_cast<std::int64_t>(n) * n * param_count(f));
  }
}

TEST_CASE("identity_net: exact weights at d = 1, parameter formula, realization") {
  const Network i1 = identity_net(1);
  CHECK(i1.layer(0).weights.data() == std::vector<double>{1.0, -1.0});
  CHECK(i1.layer(0).bias == Vec{0.0, 0.0});
  CHECK(i1.layer(1).weights.data() == std::vector<double>{1.0, -1.0});
  CHECK(i1.layer(1).bias == Vec{0.0});

  CHECK(param_count(identity_net(5)) == 115);  // 4d^2 + 3d

  Rng rng(43);
  const Network i4 = identity_net(4);
  for (int rep = 0; rep < 50; ++rep) {
    const Vec x = random_vec(rng, 4, 10.0);
    CHECK(realize(i4, x) == x);  // exact
  }
}

TEST_CASE("affine_net: projections and parameter count") {
  CHECK(realize(affine_net(Matrix::identity(3), Vec(3, 0.0)), Vec{1.0, 2.0, 3.0}) == Vec{1.0, 2.0, 3.0});
  const Network proj = affine_net(Matrix(1, 3, {0.0, 0.0, 1.0}), Vec{0.0});
  CHECK(realize(proj, Vec{5.0, -2.0, 7.0}) == Vec{7.0});
  CHECK(param_count(affine_net(Matrix(4, 6), Vec(4, 0.0))) == 4 * 7);
  CHECK_THROWS_AS(affine_net(Matrix(2, 2), Vec{0.0}), ShapeError);
}

TEST_CASE("power: zero case, dims, realization") {
  const Network p0 = power(identity_net(1), 0);
  CHECK(dims(p0) == std::vector<std::int64_t>{1, 1});
  CHECK(realize(p0, Vec{-3.5}) == Vec{-3.5});

  CHECK(dims(power(identity_net(1), 3)) == std::vector<std::int64_t>{1, 2, 2, 2, 1});

  Rng rng(47);
  const Network p4 = power(identity_net(2), 4);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec x = random_vec(rng, 2, 5.0);
    CHECK(realize(p4, x) == x);
  }

  CHECK_THROWS_AS(power(affine_net(Matrix(2, 3), Vec(2, 0.0)), 2), ComposeError);
}

TEST_CASE("extend: dims table, equal-length no-op, unchanged realization") {
  const Network aff = affine_scalar(2.0, 1.0);
  const Network padded = extend(aff, ExtensionConfig{3, identity_net(1)});
  CHECK(dims(padded) == std::vector<std::int64_t>{1, 2, 2, 1});
  CHECK(padded.length() == 3);

  Rng rng(53);
  const Network f = oracle::random_network(rng, 2, 3, 2);
  const Network same = extend(f, ExtensionConfig{f.length(), identity_net(3)});
  CHECK(networks_close(same, f, 0.0));
  CHECK(param_count(same) == param_count(f));

  const Network longer = extend(f, ExtensionConfig{5, identity_net(3)});
  CHECK(longer.length() == 5);
  for (int rep = 0; rep < 50; ++rep) {
    const Vec x = random_vec(rng, 2);
    const Vec a = realize(f, x), b = realize(longer, x);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-13));
  }

  CHECK_THROWS_AS(extend(f, ExtensionConfig{1, identity_net(3)}), ComposeError);
  CHECK_THROWS_AS(extend(f, ExtensionConfig{4, identity_net(2)}), ComposeError);
  CHECK_THROWS_AS(extend(f, ExtensionConfig{4, oracle::random_network(rng, 3, 3, 3)}), ComposeError);
}

TEST_CASE("extension parameter bound with identity pads") {
  Rng rng(59);
  for (int rep = 0; rep < 30; ++rep) {
    const std::int64_t d = 1 + rng.next() % 3;
    const Network f = oracle::random_network(rng, 2, d, 1 + rng.next() % 3);
    const std::int64_t target = f.length() + 1 + static_cast<std::int64_t>(rng.next() % 3);
    const Network longer = extend(f, ExtensionConfig{target, identity_net(d)});
    // Lemma form: max{1, i/d} P(f) + ((L - L(f) - 1) i + d)(i + 1).
    const double i = 2.0 * static_cast<double>(d);
    const double lemma_bound =
        std::max(1.0, i / static_cast<double>(d)) * static_cast<double>(param_count(f)) +
        ((static_cast<double>(target - f.length()) - 1.0) * i + static_cast<double>(d)) * (i + 1.0);
    CHECK(static_cast<double>(param_count(longer)) <= lemma_bound);
  }
}

TEST_CASE("parallelize_varlen: mixed lengths and default pads") {
  const Network m2 = build_max(2);          // length 2
  const Network aff = affine_scalar(3.0, -1.0);  // length 1
  const Network par = parallelize_varlen({m2, aff});
  CHECK(par.length() == 2);
  CHECK(par.input_dim() == 3);

  Rng rng(61);
  for (int rep = 0; rep < 50; ++rep) {
    const Vec x = random_vec(rng, 2);
    const double t = rng.uniform(-2.0, 2.0);
    const Vec out = realize(par, Vec{x[0], x[1], t});
    CHECK(out[0] == doctest::Approx(std::max(x[0], x[1])).epsilon(1e-13));
    CHECK(out[1] == doctest::Approx(3.0 * t - 1.0).epsilon(1e-13));
  }

  // Equal lengths collapse to plain parallelization, layer by layer.
  const Network a = oracle::random_network(rng, 2, 2, 2);
  const Network b = oracle::random_network(rng, 1, 3, 2);
  CHECK(networks_close(parallelize_varlen({a, b}), parallelize_equal({a, b}), 0.0));

  // Pad shape violations.
  CHECK_THROWS_AS(parallelize_varlen({m2, aff}, {identity_net(2), identity_net(1)}), ComposeError);
}

TEST_CASE("compose_chain_with_identities: equivalence and parameter bound") {
  // M_2 . P_2(M_2, M_2) with interposed identity realizes M_4.
  const Network m2 = build_max(2);
  const Network chained = compose_chain_with_identities({m2, parallelize_equal({m2, m2})});
  const Network m4 = build_max(4);
  Rng rng(67);
  for (int rep = 0; rep < 100; ++rep) {
    Vec x = random_vec(rng, 4, 3.0);
    CHECK(realize(chained, x)[0] == doctest::Approx(realize(m4, x)[0]).epsilon(1e-13));
  }

  // Single-element chains are returned untouched.
  CHECK(networks_close(compose_chain_with_identities({m2}), m2, 0.0));

  // P <= 3 sum P(f_k) - P(first) - P(last) on random chains of library blocks.
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Network> chain;
    std::int64_t dim = 1 + rng.next() % 3;
    const int n = 2 + static_cast<int>(rng.next() % 3);
    for (int k = 0; k < n; ++k) {
      const int pick = static_cast<int>(rng.next() % 3);
      if (pick == 0) {
        chain.push_back(identity_net(dim));
      } else if (pick == 1) {
        const std::int64_t next = 1 + rng.next() % 3;
        Matrix w(dim, next);
        for (auto& v : w.data()) v = rng.uniform(-1.0, 1.0);
        chain.push_back(affine_net(std::move(w), Vec(static_cast<std::size_t>(dim), 0.0)));
        dim = next;
      } else {
        std::vector<Network> blocks(static_cast<std::size_t>(dim), build_max(2));
        chain.push_back(compose(parallelize_equal(blocks), affine_net(Matrix::identity(2 * dim) , Vec(static_cast<std::size_t>(2 * dim), 0.0))));
        dim = 2 * dim;
      }
    }
    // Built outermost first: each element's input feeds from the next one.
    std::int64_t sum_p = 0;
    for (const auto& f : chain) sum_p += param_count(f);
    const Network whole = compose_chain_with_identities(chain);
    CHECK(param_count(whole) <= 3 * sum_p - param_count(chain.front()) - param_count(chain.back()));

    // Realization equals the plain composition chain.
    Network plain = chain.back();
    for (std::size_t k = chain.size() - 1; k-- > 0;) plain = compose(chain[k], plain);
    const Vec x = random_vec(rng, plain.input_dim());
    const Vec u = realize(whole, x), v = realize(plain, x);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] == doctest::Approx(v[i]).epsilon(1e-11));
  }

  CHECK_THROWS_AS(compose_chain_with_identities({m2, m2}), ComposeError);
}
