#include <cmath>
#include <random>

#include "binofeat/autodiff.hpp"
#include "binofeat/errors.hpp"
#include "doctest.h"
#include "fd_check.hpp"

using namespace binofeat;
using namespace binofeat::testing;

TEST_CASE("constants and parameters set requires_grad") {
  auto c = make_constant(Tensor::scalar(1.f));
  auto p = make_parameter(Tensor::scalar(1.f));
  CHECK_FALSE(c->requires_grad);
  CHECK(p->requires_grad);
  CHECK_FALSE(add(c, c)->requires_grad);
  CHECK(add(c, p)->requires_grad);
}

TEST_CASE("backward seeds the root and grads persist until zeroed") {
  auto p = make_parameter(Tensor::from_data({3}, {1, 2, 3}));
  auto root = sum(p);
  backward(root);
  CHECK(root->grad.at(0) == 1.f);
  for (int i = 0; i < 3; ++i) CHECK(p->grad.at(i) == 1.f);
  // The +1 seed accumulates on the root as well, so a second pass without
  // zeroing pushes the doubled root gradient down; callers are expected to
  // zero gradients between steps.
  backward(root);
  CHECK(root->grad.at(0) == 2.f);
  for (int i = 0; i < 3; ++i) CHECK(p->grad.at(i) == 3.f);
  p->zero_grad();
  for (int i = 0; i < 3; ++i) CHECK(p->grad.at(i) == 0.f);
}

TEST_CASE("backward requires a scalar root") {
  auto p = make_parameter(Tensor::from_data({2}, {1, 2}));
  CHECK_THROWS_AS(backward(add(p, p)), ShapeError);
}

TEST_CASE("a node feeding two consumers gets both contributions") {
  auto p = make_parameter(Tensor::scalar(3.f));
  auto root = sum(add(mul(p, p), p));  // d/dp (p^2 + p) = 2p + 1 = 7
  backward(root);
  CHECK(p->grad.at(0) == doctest::Approx(7.f));
}

TEST_CASE("elementwise forward values") {
  auto x = make_constant(Tensor::from_data({5}, {-2.f, -0.5f, 0.f, 0.5f, 2.f}));
  auto r = relu(x);
  CHECK(r->value.at(0) == 0.f);
  CHECK(r->value.at(2) == 0.f);
  CHECK(r->value.at(3) == 0.5f);

  auto s = sigmoid(x);
  CHECK(s->value.at(2) == doctest::Approx(0.5));
  CHECK(s->value.at(4) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));

  auto a = add_scalar(x, 1.5);
  CHECK(a->value.at(0) == doctest::Approx(-0.5));
  auto sc = scale(x, -2.0);
  CHECK(sc->value.at(4) == doctest::Approx(-4.0));
}

TEST_CASE("sigmoid output is clamped away from 0 and 1") {
  auto x = make_constant(Tensor::from_data({2}, {-100.f, 100.f}));
  auto s = sigmoid(x);
  CHECK(s->value.at(0) > 0.f);
  CHECK(s->value.at(1) < 1.f);
  // log of the clamped sigmoid stays finite.
  CHECK(std::isfinite(log_clamped(s)->value.at(0)));
}

TEST_CASE("log_clamped floors its argument") {
  auto x = make_constant(Tensor::from_data({2}, {0.f, 1.f}));
  auto l = log_clamped(x);
  CHECK(l->value.at(0) == doctest::Approx(std::log(1e-12)));
  CHECK(l->value.at(1) == doctest::Approx(0.0));
}

TEST_CASE("sign_ste forward is the hard sign with sign(0) = +1") {
  auto x = make_constant(Tensor::from_data({5}, {-3.f, -1e-8f, 0.f, 1e-8f, 3.f}));
  auto s = sign_ste(x);
  CHECK(s->value.at(0) == -1.f);
  CHECK(s->value.at(1) == -1.f);
  CHECK(s->value.at(2) == 1.f);
  CHECK(s->value.at(3) == 1.f);
  CHECK(s->value.at(4) == 1.f);
}

TEST_CASE("sign_ste backward passes gradients exactly where |x| <= 1") {
  const std::vector<float> xs{-2.f, -1.5f, -1.f, -0.5f, 0.f, 0.5f, 1.f, 1.5f, 2.f};
  auto p = make_parameter(Tensor::from_data({static_cast<int>(xs.size())},
                                            std::vector<float>(xs)));
  // Upstream gradient 2.0 on every element.
  backward(sum(scale(sign_ste(p), 2.0)));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const float expected = std::abs(xs[i]) <= 1.f ? 2.f : 0.f;
    CHECK(p->grad.at(static_cast<int>(i)) == expected);
  }
}

TEST_CASE("pixel_shuffle rearranges channels into space") {
  std::vector<float> data(16);
  for (int i = 0; i < 16; ++i) data[static_cast<std::size_t>(i)] = static_cast<float>(i);
  auto x = make_constant(Tensor::from_data({4, 2, 2}, std::move(data)));
  auto y = pixel_shuffle(x, 2);
  REQUIRE(y->value.shape() == std::vector<int>{1, 4, 4});
  const float expected[4][4] = {
      {0, 4, 1, 5}, {8, 12, 9, 13}, {2, 6, 3, 7}, {10, 14, 11, 15}};
  for (int yy = 0; yy < 4; ++yy)
    for (int xx = 0; xx < 4; ++xx) CHECK(y->value.at(0, yy, xx) == expected[yy][xx]);
}

TEST_CASE("pixel_shuffle validates the channel count") {
  auto x = make_constant(Tensor::zeros({3, 2, 2}));  // 3 not divisible by r*r
  CHECK_THROWS_AS(pixel_shuffle(x, 2), ShapeError);
}

TEST_CASE("conv2d computes a hand-checked correlation") {
  auto input = make_constant(Tensor::from_data({1, 3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9}));
  auto weight = make_constant(Tensor::from_data({1, 1, 2, 2}, {1, 0, 0, -1}));
  auto bias = make_constant(Tensor::from_data({1}, {0.5f}));
  auto out = conv2d(input, weight, bias, 1, 0);
  REQUIRE(out->value.shape() == std::vector<int>{1, 2, 2});
  // out(y,x) = in(y,x) - in(y+1,x+1) + 0.5 = -3.5 everywhere.
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) CHECK(out->value.at(0, y, x) == doctest::Approx(-3.5));
}

TEST_CASE("conv2d stride and padding produce the documented output size") {
  auto input = make_constant(Tensor::zeros({2, 16, 12}));
  auto weight = make_constant(Tensor::zeros({5, 2, 4, 4}));
  auto bias = make_constant(Tensor::zeros({5}));
  auto out = conv2d(input, weight, bias, 2, 1);
  CHECK(out->value.shape() == std::vector<int>{5, 8, 6});
}

TEST_CASE("conv2d rejects mismatched channel counts") {
  auto input = make_constant(Tensor::zeros({3, 8, 8}));
  auto weight = make_constant(Tensor::zeros({4, 2, 3, 3}));  // expects Cin=2
  auto bias = make_constant(Tensor::zeros({4}));
  CHECK_THROWS_AS(conv2d(input, weight, bias, 1, 0), ShapeError);
}

TEST_CASE("finite differences confirm conv2d gradients") {
  std::mt19937 rng(100);
  const auto build = [](const std::vector<NodePtr>& p) {
    return weighted_sum(conv2d(p[0], p[1], p[2], 2, 1), 9);
  };
  const double err = fd_max_rel_error(
      build, {random_tensor({2, 6, 6}, rng), random_tensor({3, 2, 4, 4}, rng),
              random_tensor({3}, rng)});
  CHECK(err < 1e-3);
}

TEST_CASE("finite differences confirm the elementwise op gradients") {
  std::mt19937 rng(101);
  CHECK(fd_max_rel_error([](const std::vector<NodePtr>& p) {
          return weighted_sum(relu(p[0]), 1);
        }, {random_tensor_away_from_zero({4, 5}, rng, 0.2f)}) < 1e-3);
  CHECK(fd_max_rel_error([](const std::vector<NodePtr>& p) {
          return weighted_sum(sigmoid(p[0]), 2);
        }, {random_tensor({3, 7}, rng, -2.f, 2.f)}) < 1e-3);
  CHECK(fd_max_rel_error([](const std::vector<NodePtr>& p) {
          return weighted_sum(log_clamped(p[0]), 3);
        }, {random_tensor({6}, rng, 0.5f, 2.f)}) < 1e-3);
  CHECK(fd_max_rel_error([](const std::vector<NodePtr>& p) {
          return weighted_sum(mul(p[0], p[1]), 4);
        }, {random_tensor({2, 3}, rng), random_tensor({2, 3}, rng)}) < 1e-3);
  CHECK(fd_max_rel_error([](const std::vector<NodePtr>& p) {
          return weighted_sum(sub(p[0], p[1]), 5);
        }, {random_tensor({5}, rng), random_tensor({5}, rng)}) < 1e-3);
  CHECK(fd_max_rel_error([](const std::vector<NodePtr>& p) {
          return weighted_sum(add_n({p[0], p[1], p[2]}), 6);
        }, {random_tensor({4}, rng), random_tensor({4}, rng), random_tensor({4}, rng)}) <
        1e-3);
  CHECK(fd_max_rel_error([](const std::vector<NodePtr>& p) {
          return sum(scale(add_scalar(p[0], 0.7), -1.3));
        }, {random_tensor({3, 3}, rng)}) < 1e-3);
}

TEST_CASE("finite differences confirm reduction and gather gradients") {
  std::mt19937 rng(102);
  CHECK(fd_max_rel_error([](const std::vector<NodePtr>& p) {
          return weighted_sum(row_sum(p[0]), 7);
        }, {random_tensor({4, 6}, rng)}) < 1e-3);
  CHECK(fd_max_rel_error([](const std::vector<NodePtr>& p) {
          return weighted_sum(row_select(p[0], {2, 0, 2}), 8);
        }, {random_tensor({3, 4}, rng)}) < 1e-3);
  const std::vector<GridPoint> pts{{0.3, 0.7}, {1.6, 0.2}, {2.0, 1.0}};
  CHECK(fd_max_rel_error([&pts](const std::vector<NodePtr>& p) {
          return weighted_sum(bilinear_gather(p[0], pts), 9);
        }, {random_tensor({2, 3, 4}, rng)}) < 1e-3);
  CHECK(fd_max_rel_error([](const std::vector<NodePtr>& p) {
          return weighted_sum(pixel_shuffle(p[0], 2), 10);
        }, {random_tensor({8, 3, 2}, rng)}) < 1e-3);
}

TEST_CASE("row_select repeats rows and accumulates their gradients") {
  auto p = make_parameter(Tensor::from_data({2, 2}, {1, 2, 3, 4}));
  auto sel = row_select(p, {1, 1, 0});
  REQUIRE(sel->value.shape() == std::vector<int>{3, 2});
  CHECK(sel->value.at(0, 0) == 3.f);
  CHECK(sel->value.at(2, 1) == 2.f);
  backward(sum(sel));
  CHECK(p->grad.at(0, 0) == 1.f);
  CHECK(p->grad.at(1, 0) == 2.f);  // selected twice
  CHECK_THROWS_AS(row_select(p, {2}), BoundsError);
  CHECK_THROWS_AS(row_select(p, {}), ShapeError);
}

TEST_CASE("bilinear_gather interpolates per channel and clamps outside points") {
  // Map [1,2,2]: f(x,y) over corners 1,3 / 5,7 as in the image tests.
  auto map = make_constant(Tensor::from_data({1, 2, 2}, {1, 3, 5, 7}));
  const std::vector<GridPoint> pts{{0.25, 0.75}, {-5.0, 0.0}, {9.0, 9.0}};
  auto g = bilinear_gather(map, pts);
  REQUIRE(g->value.shape() == std::vector<int>{3, 1});
  const double expected = 1 * 0.75 * 0.25 + 3 * 0.25 * 0.25 + 5 * 0.75 * 0.75 +
                          7 * 0.25 * 0.75;
  CHECK(g->value.at(0, 0) == doctest::Approx(expected));
  CHECK(g->value.at(1, 0) == doctest::Approx(1.0));  // clamped to (0,0)
  CHECK(g->value.at(2, 0) == doctest::Approx(7.0));  // clamped to (1,1)
}

TEST_CASE("ops propagate numeric failures") {
  auto big = make_constant(Tensor::full({2}, 3e38f));
  CHECK_THROWS_AS(add(big, big), NumericError);  // overflows to inf
}

TEST_CASE("add_n rejects an empty list and mismatched shapes") {
  CHECK_THROWS_AS(add_n({}), ShapeError);
  auto a = make_constant(Tensor::zeros({2}));
  auto b = make_constant(Tensor::zeros({3}));
  CHECK_THROWS_AS(add_n({a, b}), ShapeError);
}
