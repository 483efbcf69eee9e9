#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "occlu/image.hpp"
#include "test_util.hpp"

using namespace occlu;

namespace {

Image random_image(uint64_t seed, int w, int h, int c) {
  Image img(w, h, c);
  std::mt19937_64 g(seed);
  for (uint8_t& v : img.data) v = static_cast<uint8_t>(g() & 0xff);
  return img;
}

// Independent point-in-polygon: even-odd with a ray cast toward -x instead
// of +x. Both rules agree away from edges.
bool pip_oracle(const Polygon& poly, double x, double y) {
  bool inside = false;
  const size_t n = poly.pts.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly.pts[i];
    const Vec2& b = poly.pts[j];
    if ((a.y > y) != (b.y > y)) {
      const double cross_x = a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (x > cross_x) inside = !inside;
    }
  }
  return inside;
}

double edge_distance(const Polygon& poly, double x, double y) {
  double best = 1e300;
  const size_t n = poly.pts.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly.pts[i];
    const Vec2& b = poly.pts[j];
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? ((x - a.x) * vx + (y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = x - (a.x + t * vx), dy = y - (a.y + t * vy);
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

}  // namespace

TEST_CASE("ppm round trip is bit exact") {
  testutil::TempDir tmp;
  for (int c : {1, 3}) {
    const Image img = random_image(42 + c, 37, 23, c);
    const std::string path = tmp.file(c == 1 ? "img.pgm" : "img.ppm");
    save_image(img, path);
    const Image back = load_image(path);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.channels == img.channels);
    CHECK(back.data == img.data);
  }
}

TEST_CASE("ppm loader accepts comments and rejects bad input") {
  testutil::TempDir tmp;

  const std::string ok = tmp.file("ok.pgm");
  testutil::write_text(ok, "P5 # comment\n# another\n 2 2\n255\nabcd");
  const Image img = load_image(ok);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.data == std::vector<uint8_t>{'a', 'b', 'c', 'd'});

  const std::string ascii = tmp.file("ascii.ppm");
  testutil::write_text(ascii, "P3\n1 1\n255\n1 2 3\n");
  CHECK_THROWS_WITH_AS(load_image(ascii), doctest::Contains("unsupported"),
                       FormatError);

  const std::string deep = tmp.file("deep.pgm");
  testutil::write_text(deep, "P5\n1 1\n65535\n\0\0");
  CHECK_THROWS_WITH_AS(load_image(deep), doctest::Contains("bit depth"),
                       FormatError);

  const std::string trunc = tmp.file("trunc.pgm");
  testutil::write_text(trunc, "P5\n4 4\n255\nabc");
  CHECK_THROWS_WITH_AS(load_image(trunc), doctest::Contains("truncated"),
                       FormatError);

  CHECK_THROWS_AS(load_image(tmp.file("missing.pgm")), IoError);
}

TEST_CASE("grayscale uses the bt.601 weights with rounding") {
  Image img(3, 1, 3);
  const uint8_t px[3][3] = {{255, 0, 0}, {0, 255, 0}, {0, 0, 255}};
  for (int x = 0; x < 3; ++x) {
    for (int c = 0; c < 3; ++c) img.at(x, 0, c) = px[x][c];
  }
  const Image gray = to_grayscale(img);
  CHECK(gray.channels == 1);
  CHECK(gray.at(0, 0) == 76);   // round(0.299 * 255)
  CHECK(gray.at(1, 0) == 150);  // round(0.587 * 255)
  CHECK(gray.at(2, 0) == 29);   // round(0.114 * 255)

  const Image already = random_image(7, 5, 4, 1);
  CHECK(to_grayscale(already).data == already.data);
}

TEST_CASE("bilinear resize: identity and hand-checked upscale") {
  const Image img = random_image(3, 17, 11, 3);
  const Image same = resize_bilinear(img, 17, 11);
  CHECK(same.data == img.data);

  // centers map to src = (dst + 0.5) * (in/out) - 0.5; for 2 -> 4 columns the
  // samples land at -0.25, 0.25, 0.75, 1.25 (clamped at the edges)
  Image row(2, 1, 1);
  row.at(0, 0) = 0;
  row.at(1, 0) = 100;
  const Image up = resize_bilinear(row, 4, 1);
  CHECK(up.at(0, 0) == 0);
  CHECK(up.at(1, 0) == 25);
  CHECK(up.at(2, 0) == 75);
  CHECK(up.at(3, 0) == 100);

  CHECK_THROWS_AS(resize_bilinear(img, 0, 4), InvalidInput);
}

TEST_CASE("gaussian blur preserves constant images exactly") {
  for (double sigma : {0.5, 1.0, 2.3}) {
    Image img(9, 7, 3, 142);
    const Image out = gaussian_blur(img, sigma);
    CHECK(out.data == img.data);
  }
  CHECK_THROWS_AS(gaussian_blur(Image(4, 4, 1), 0.0), InvalidInput);
}

TEST_CASE("gaussian blur impulse response matches the kernel product") {
  const double sigma = 0.8;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  Image img(11, 11, 1, 0);
  img.at(5, 5) = 255;
  const Image out = gaussian_blur(img, sigma);
  for (int y = 0; y < 11; ++y) {
    for (int x = 0; x < 11; ++x) {
      double expect = 0.0;
      if (std::abs(x - 5) <= radius && std::abs(y - 5) <= radius) {
        expect = 255.0 * kernel[x - 5 + radius] * kernel[y - 5 + radius];
      }
      CHECK(out.at(x, y) == static_cast<uint8_t>(std::floor(expect + 0.5)));
    }
  }
}

TEST_CASE("point-in-polygon agrees with an opposite-ray oracle") {
  std::mt19937_64 g(99);
  auto uni = [&] { return (g() >> 11) * (1.0 / 9007199254740992.0); };
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Polygon poly;
    const int n = 5 + static_cast<int>(g() % 8);
    for (int i = 0; i < n; ++i) {
      poly.pts.push_back({uni() * 20.0, uni() * 20.0});
    }
    for (int q = 0; q < 50; ++q) {
      const double x = uni() * 22.0 - 1.0;
      const double y = uni() * 22.0 - 1.0;
      if (edge_distance(poly, x, y) < 1e-6) continue;  // rule-dependent zone
      CHECK(point_in_polygon(poly, x, y) == pip_oracle(poly, x, y));
      ++checked;
    }
  }
  CHECK(checked > 9000);
}

TEST_CASE("ellipse polygon lies on the ellipse") {
  const Polygon e = ellipse_polygon(3.0, -2.0, 5.0, 2.5, 48);
  REQUIRE(e.pts.size() == 48);
  for (const Vec2& p : e.pts) {
    const double u = (p.x - 3.0) / 5.0, v = (p.y + 2.0) / 2.5;
    CHECK(std::abs(u * u + v * v - 1.0) < 1e-12);
  }
  const Box bb = e.bbox();
  CHECK(bb.min_x >= -2.0 - 1e-9);
  CHECK(bb.max_x <= 8.0 + 1e-9);
}

TEST_CASE("polygon fill covers exactly the pixel centers inside") {
  Image img(4, 4, 1, 0);
  Polygon rect;
  rect.pts = {{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}};
  fill_polygon_inplace(img, rect, Rgb{255, 255, 255}, 1.0);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      const bool inside = x < 2 && y < 2;  // centers 0.5, 1.5 only
      CHECK(img.at(x, y) == (inside ? 255 : 0));
    }
  }
}

TEST_CASE("polygon fill blends with round-half-up") {
  Image img(2, 1, 3, 100);
  Polygon all;
  all.pts = {{-1.0, -1.0}, {3.0, -1.0}, {3.0, 2.0}, {-1.0, 2.0}};
  SUBCASE("half alpha") {
    fill_polygon_inplace(img, all, Rgb{201, 201, 201}, 0.5);
    CHECK(img.at(0, 0, 0) == 151);  // 150.5 rounds up
  }
  SUBCASE("quarter alpha") {
    fill_polygon_inplace(img, all, Rgb{200, 200, 200}, 0.25);
    CHECK(img.at(0, 0, 0) == 125);
  }
  SUBCASE("gray target blends against the color's luma") {
    Image gray(1, 1, 1, 0);
    fill_polygon_inplace(gray, all, Rgb{255, 0, 0}, 1.0);
    CHECK(gray.at(0, 0) == 76);
  }
  SUBCASE("alpha out of range") {
    CHECK_THROWS_AS(fill_polygon_inplace(img, all, Rgb{0, 0, 0}, 1.5),
                    InvalidInput);
  }
}

TEST_CASE("fill uses the even-odd rule for self-overlapping outlines") {
  // outer square with an inner square traced as one outline: the inner
  // region is crossed twice, so it stays unfilled
  Image img(8, 8, 1, 0);
  Polygon ring;
  ring.pts = {{0, 0}, {8, 0}, {8, 8}, {0, 8}, {0, 0},
              {2, 2}, {6, 2}, {6, 6}, {2, 6}, {2, 2}};
  fill_polygon_inplace(img, ring, Rgb{255, 255, 255}, 1.0);
  CHECK(img.at(1, 1) == 255);
  CHECK(img.at(4, 4) == 0);
  CHECK(img.at(6, 6) == 255);
}

TEST_CASE("textured blit stretches the texture and shades vertically") {
  SUBCASE("no shading pastes the texture values") {
    Image img(6, 6, 3, 0);
    Image tex(2, 2, 3, 200);
    Polygon rect;
    rect.pts = {{0.0, 0.0}, {6.0, 0.0}, {6.0, 6.0}, {0.0, 6.0}};
    blit_textured_inplace(img, rect, tex, false);
    for (int y = 0; y < 6; ++y) {
      for (int x = 0; x < 6; ++x) CHECK(img.at(x, y, 1) == 200);
    }
  }
  SUBCASE("shading fades from full strength to 0.6") {
    Image img(4, 10, 3, 0);
    Image tex(3, 3, 3, 200);
    Polygon rect;
    rect.pts = {{0.0, 0.0}, {4.0, 0.0}, {4.0, 10.0}, {0.0, 10.0}};
    blit_textured_inplace(img, rect, tex, true);
    // v = (y + 0.5) / 10, shade = 1 - 0.4 v
    for (int y = 0; y < 10; ++y) {
      const double shade = 1.0 - 0.4 * ((y + 0.5) / 10.0);
      const auto expect =
          static_cast<uint8_t>(std::floor(200.0 * shade + 0.5));
      CHECK(img.at(2, y, 0) == expect);
    }
    CHECK(img.at(2, 0, 0) > img.at(2, 9, 0));
  }
  SUBCASE("gray targets get the texture luma") {
    Image img(3, 3, 1, 0);
    Image tex(2, 2, 3);
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 2; ++x) {
        tex.at(x, y, 0) = 255;  // pure red -> luma 76
      }
    }
    Polygon rect;
    rect.pts = {{0.0, 0.0}, {3.0, 0.0}, {3.0, 3.0}, {0.0, 3.0}};
    blit_textured_inplace(img, rect, tex, false);
    CHECK(img.at(1, 1) == 76);
  }
  SUBCASE("texture must be rgb") {
    Image img(3, 3, 3, 0);
    Image tex(2, 2, 1, 7);
    Polygon rect;
    rect.pts = {{0.0, 0.0}, {3.0, 0.0}, {3.0, 3.0}, {0.0, 3.0}};
    CHECK_THROWS_AS(blit_textured_inplace(img, rect, tex, false),
                    InvalidInput);
  }
}
