#include <cmath>
#include <limits>

#include "binofeat/errors.hpp"
#include "binofeat/tensor.hpp"
#include "doctest.h"

using namespace binofeat;

TEST_CASE("tensor construction and shape accessors") {
  Tensor t({2, 3, 4});
  CHECK(t.ndim() == 3);
  CHECK(t.dim(0) == 2);
  CHECK(t.dim(1) == 3);
  CHECK(t.dim(2) == 4);
  CHECK(t.numel() == 24);
  for (std::int64_t i = 0; i < t.numel(); ++i) CHECK(t[i] == 0.f);

  Tensor f = Tensor::full({2, 2}, 1.5f);
  CHECK(f.numel() == 4);
  CHECK(f.at(1, 1) == 1.5f);

  Tensor s = Tensor::scalar(-3.f);
  CHECK(s.ndim() == 1);
  CHECK(s.numel() == 1);
  CHECK(s.at(0) == -3.f);
}

TEST_CASE("tensor row-major indexing") {
  Tensor t = Tensor::from_data({2, 3}, {0, 1, 2, 3, 4, 5});
  CHECK(t.at(0, 0) == 0.f);
  CHECK(t.at(0, 2) == 2.f);
  CHECK(t.at(1, 0) == 3.f);
  CHECK(t.at(1, 2) == 5.f);

  Tensor u = Tensor::from_data({2, 2, 2}, {0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(u.at(0, 0, 0) == 0.f);
  CHECK(u.at(0, 1, 0) == 2.f);
  CHECK(u.at(1, 0, 1) == 5.f);
  CHECK(u.at(1, 1, 1) == 7.f);
}

TEST_CASE("tensor from_data validates the element count") {
  CHECK_THROWS_AS(Tensor::from_data({2, 2}, {1.f, 2.f, 3.f}), ShapeError);
  CHECK_NOTHROW(Tensor::from_data({2, 2}, {1.f, 2.f, 3.f, 4.f}));
}

TEST_CASE("tensor rejects non-positive dimensions") {
  CHECK_THROWS_AS(Tensor({2, 0}), ShapeError);
  CHECK_THROWS_AS(Tensor({-1}), ShapeError);
}

TEST_CASE("tensor fill and all_finite") {
  Tensor t({3});
  t.fill(2.f);
  CHECK(t.at(2) == 2.f);
  CHECK(t.all_finite());
  t.at(1) = std::numeric_limits<float>::infinity();
  CHECK_FALSE(t.all_finite());
  t.at(1) = std::numeric_limits<float>::quiet_NaN();
  CHECK_FALSE(t.all_finite());
}

TEST_CASE("tensor same_shape and shape_str") {
  Tensor a({2, 3});
  Tensor b({2, 3});
  Tensor c({3, 2});
  CHECK(a.same_shape(b));
  CHECK_FALSE(a.same_shape(c));
  CHECK(a.shape_str() == "[2,3]");
}
