#include <cmath>
#include <vector>

#include "binofeat/errors.hpp"
#include "binofeat/rng.hpp"
#include "binofeat/shi_tomasi.hpp"
#include "doctest.h"

using namespace binofeat;

namespace {

// Independent reference: central-difference gradients, 3x3 structure tensor,
// minimum eigenvalue clamped at zero, 2-pixel zero border.
double reference_response(const ImageF32& gray, int cx, int cy) {
  auto gx = [&](int x, int y) { return 0.5 * (gray.at(x + 1, y) - gray.at(x - 1, y)); };
  auto gy = [&](int x, int y) { return 0.5 * (gray.at(x, y + 1) - gray.at(x, y - 1)); };
  double sxx = 0, sxy = 0, syy = 0;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      const double ix = gx(cx + dx, cy + dy);
      const double iy = gy(cx + dx, cy + dy);
      sxx += ix * ix;
      sxy += ix * iy;
      syy += iy * iy;
    }
  const double tr = 0.5 * (sxx + syy), df = 0.5 * (sxx - syy);
  return std::max(tr - std::sqrt(df * df + sxy * sxy), 0.0);
}

}  // namespace

TEST_CASE("shi-tomasi is zero on constant images and image borders") {
  const ImageF32 flat(16, 12, 0.5f);
  const ImageF32 r = shi_tomasi_response(flat);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 16; ++x) CHECK(r.at(x, y) == 0.f);

  // Textured image: the outer two rows/columns still read zero.
  std::mt19937 rng(3);
  ImageF32 noisy(16, 12);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 16; ++x) noisy.at(x, y) = uniform_float(rng, 0.f, 1.f);
  const ImageF32 rn = shi_tomasi_response(noisy);
  for (int x = 0; x < 16; ++x) {
    CHECK(rn.at(x, 0) == 0.f);
    CHECK(rn.at(x, 1) == 0.f);
    CHECK(rn.at(x, 10) == 0.f);
    CHECK(rn.at(x, 11) == 0.f);
  }
  for (int y = 0; y < 12; ++y) {
    CHECK(rn.at(0, y) == 0.f);
    CHECK(rn.at(1, y) == 0.f);
    CHECK(rn.at(14, y) == 0.f);
    CHECK(rn.at(15, y) == 0.f);
  }
}

TEST_CASE("shi-tomasi vanishes on a pure linear ramp") {
  // Gradient is spatially constant, so the structure tensor is rank one and
  // the minimum eigenvalue is zero (up to float rounding).
  ImageF32 ramp(16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) ramp.at(x, y) = 0.03f * static_cast<float>(x) +
                                                 0.01f * static_cast<float>(y);
  const ImageF32 r = shi_tomasi_response(ramp);
  for (int y = 2; y < 14; ++y)
    for (int x = 2; x < 14; ++x) CHECK(r.at(x, y) <= 1e-6f);
}

TEST_CASE("shi-tomasi responds strongest at a checkerboard corner") {
  // 2x2 block checkerboard: a corner where four blocks meet has gradients in
  // both directions; block interiors have none.
  ImageF32 board(20, 20);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) board.at(x, y) = ((x / 5 + y / 5) % 2 == 0) ? 1.f : 0.f;
  const ImageF32 r = shi_tomasi_response(board);
  // (4,4)..(5,5) region around the junction of four blocks carries response.
  float corner = 0.f;
  for (int y = 3; y <= 6; ++y)
    for (int x = 3; x <= 6; ++x) corner = std::max(corner, r.at(x, y));
  CHECK(corner > 0.01f);
  // Deep inside a block everything is flat.
  CHECK(r.at(2, 12) == 0.f);
}

TEST_CASE("shi-tomasi matches the closed-form reference on random images") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    ImageF32 img(13, 11);
    for (int y = 0; y < 11; ++y)
      for (int x = 0; x < 13; ++x) img.at(x, y) = uniform_float(rng, 0.f, 1.f);
    const ImageF32 r = shi_tomasi_response(img);
    for (int y = 2; y < 9; ++y)
      for (int x = 2; x < 11; ++x) {
        const double ref = reference_response(img, x, y);
        CHECK(std::abs(r.at(x, y) - ref) <= 1e-6 + 1e-3 * ref);
      }
  }
}

TEST_CASE("shi-tomasi rejects images smaller than its window") {
  CHECK_THROWS_AS(shi_tomasi_response(ImageF32(4, 8)), ShapeError);
  CHECK_THROWS_AS(shi_tomasi_response(ImageF32(8, 4)), ShapeError);
}
