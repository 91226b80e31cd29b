#include <doctest.h>

#include <random>

#include "layersplit/model.hpp"
#include "support/fixtures.hpp"

using namespace layersplit;
using layersplit::testing::brute_force_objective;
using layersplit::testing::fd_partial;
using layersplit::testing::full_layers;
using layersplit::testing::random_image;

// Expected values below were confirmed in exact rational arithmetic by
// tests/oracles/compose_oracle.py.

TEST_CASE("compose spot values") {
  CHECK(compose(0.0, 0.0) == 0.0);
  CHECK(compose(1.0, 0.7) == 1.0);
  CHECK(compose(0.0, 0.5) == 0.5);
  CHECK(compose(0.5, 0.5) == doctest::Approx(0.65625).epsilon(1e-15));
  CHECK(compose(0.2, 0.8) == doctest::Approx(0.79392).epsilon(1e-15));
  CHECK(compose(0.4, 0.6) == doctest::Approx(0.66784).epsilon(1e-15));
  CHECK_THROWS_AS(compose(1.1, 0.0), Error);
  CHECK_THROWS_AS(compose(0.0, -0.01), Error);
  CHECK_NOTHROW(compose(1.0 + 1e-10, 0.0));
}

TEST_CASE("partial derivatives") {
  for (double x : {0.0, 0.3, 0.9}) CHECK(dz_dx(x, 0.0) == 1.0);
  CHECK(dz_dx(0.0, 0.5) == 0.25);
  CHECK(dz_dx(0.5, 0.5) == 0.4375);
  for (double y : {0.0, 0.4, 1.0}) {
    CHECK(dz_dy(0.0, y) == 1.0);
    CHECK(dz_dy(1.0, y) == 0.0);
  }
  CHECK(dz_dy(0.5, 0.5) == 0.375);

  // Central differences of compose, h = 1e-6.
  const double h = 1e-6;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double x = u(gen), y = u(gen);
    CHECK(dz_dx(x, y) == doctest::Approx((compose(x + h, y) - compose(x - h, y)) / (2 * h)).epsilon(1e-7));
    CHECK(dz_dy(x, y) == doctest::Approx((compose(x, y + h) - compose(x, y - h)) / (2 * h)).epsilon(1e-7));
  }
}

TEST_CASE("compose bounds and monotonicity") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100000; ++i) {
    const double x = u(gen), y = u(gen);
    const double z = compose(x, y);
    REQUIRE(z >= x);
    REQUIRE(z <= 1.0 + 1e-12);
    REQUIRE(dz_dy(x, y) >= -1e-12);
  }
}

TEST_CASE("overlap is brighter than the top layer") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(gen) * 0.999;
    const double y = 1e-6 + u(gen) * (1.0 - 1e-6);
    REQUIRE(compose(x, y) > x);
  }
}

TEST_CASE("compose_field") {
  const Image2D a(5, 3, 0.3), b(5, 3, 0.8);
  LayerPair p = full_layers(a, b);
  const Image2D z = compose_field(p);
  for (double v : z.pixels()) CHECK(v == compose(0.3, 0.8));

  p.valid = Mask2D(5, 3, false);
  const Image2D blank = compose_field(p);
  for (double v : blank.pixels()) CHECK(v == 0.0);

  LayerPair bad = full_layers(a, Image2D(4, 3, 0.1));
  CHECK_THROWS_AS(compose_field(bad), Error);
}

TEST_CASE("objective") {
  const LayerPair p = full_layers(random_image(6, 6, 1), random_image(6, 6, 2));
  CHECK(objective(p, layersplit::testing::rendered(p)) < 1e-30);
  CHECK(objective(p, compose_field(p)) == 0.0);

  const LayerPair zero = full_layers(Image2D(2, 2, 0.0), Image2D(2, 2, 0.0));
  CHECK(objective(zero, Image2D(2, 2, 0.5)) == 0.25);

  CHECK_THROWS_AS(objective(p, Image2D(5, 6, 0.0)), Error);
  LayerPair empty = p;
  empty.valid = Mask2D(6, 6, false);
  CHECK_THROWS_AS(objective(empty, Image2D(6, 6, 0.0)), Error);

  for (int size = 1; size <= 16; size += 3) {
    LayerPair q = full_layers(random_image(size, size, 40 + size), random_image(size, size, 80 + size));
    q.valid = Mask2D::generate(size, size, [](int x, int y) { return (x + 2 * y) % 3 != 1 || x == 0; });
    const Image2D obs = random_image(size, size, 120 + size);
    CHECK(objective(q, obs) == doctest::Approx(brute_force_objective(q, obs)).epsilon(1e-13));
  }
}

TEST_CASE("gradient") {
  SUBCASE("zero at a perfect fit") {
    const LayerPair p = full_layers(random_image(5, 5, 3), random_image(5, 5, 4));
    const Gradient g = gradient(p, compose_field(p));
    for (double v : g.gx) CHECK(v == 0.0);
    for (double v : g.gy) CHECK(v == 0.0);
  }
  SUBCASE("single pixel") {
    const LayerPair p = full_layers(Image2D(1, 1, 0.5), Image2D(1, 1, 0.5));
    const Gradient g = gradient(p, Image2D(1, 1, 0.0));
    CHECK(g.gx[0] == 0.57421875);
    CHECK(g.gy[0] == 0.4921875);
  }
  SUBCASE("zero outside the validity mask") {
    LayerPair p = full_layers(random_image(4, 4, 8), random_image(4, 4, 9));
    p.valid = Mask2D::generate(4, 4, [](int x, int) { return x < 2; });
    const Gradient g = gradient(p, Image2D(4, 4, 0.0));
    for (int y = 0; y < 4; ++y)
      for (int x = 2; x < 4; ++x) {
        CHECK(g.gx[y * 4 + x] == 0.0);
        CHECK(g.gy[y * 4 + x] == 0.0);
      }
  }
  SUBCASE("matches central finite differences") {
    const LayerPair p = full_layers(random_image(7, 6, 10, 0.05, 0.95), random_image(7, 6, 11, 0.05, 0.95));
    const Image2D obs = random_image(7, 6, 12);
    const Gradient g = gradient(p, obs);
    for (int y = 0; y < 6; ++y)
      for (int x = 0; x < 7; ++x) {
        const double fx = fd_partial(p, obs, true, x, y, 1e-5);
        const double fy = fd_partial(p, obs, false, x, y, 1e-5);
        CHECK(g.gx[y * 7 + x] == doctest::Approx(fx).epsilon(1e-5));
        CHECK(g.gy[y * 7 + x] == doctest::Approx(fy).epsilon(1e-5));
      }
  }
}
