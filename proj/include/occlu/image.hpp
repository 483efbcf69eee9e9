#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "occlu/error.hpp"

namespace occlu {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned box over real coordinates, min/max inclusive.
struct Box {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(double x, double y) const {
    return x >= min_x && x <= max_x && y >= min_y && y <= max_y;
  }
};

using Rgb = std::array<uint8_t, 3>;

// Row-major 8-bit raster with 1 (gray) or 3 (RGB) channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<uint8_t> data;

  Image() = default;
  Image(int w, int h, int c, uint8_t fill = 0)
      : width(w),
        height(h),
        channels(c),
        data(static_cast<size_t>(w) * h * c, fill) {}

  size_t index(int x, int y, int c = 0) const {
    return (static_cast<size_t>(y) * width + x) * channels + c;
  }
  // Bounds are the caller's responsibility.
  uint8_t at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }
  uint8_t& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

struct Polygon {
  std::vector<Vec2> pts;
  Box bbox() const;
};

// Regular n-gon inscribed in the axis-aligned ellipse centered at (cx, cy)
// with semi-axes rx, ry.
Polygon ellipse_polygon(double cx, double cy, double rx, double ry, int n);

// Even-odd rule; the test ray is cast toward +x. Points exactly on an edge
// land on whichever side the half-open crossing rule assigns them.
bool point_in_polygon(const Polygon& poly, double x, double y);

// Binary PGM/PPM (P5/P6), maxval 255 only. Anything else is rejected with a
// FormatError that names the problem (unsupported format, unsupported bit
// depth, malformed header, truncated pixel data).
Image load_image(const std::string& path);
void save_image(const Image& img, const std::string& path);

// BT.601 luma: round(0.299 R + 0.587 G + 0.114 B). Grayscale input is
// returned unchanged.
Image to_grayscale(const Image& img);

// Bilinear with the half-pixel-center convention; sampling coordinates are
// clamped at the borders. A same-size request reproduces the input exactly.
Image resize_bilinear(const Image& img, int out_w, int out_h);

// Separable Gaussian, kernel radius ceil(3*sigma), clamp-to-edge borders,
// single final rounding. sigma must be > 0.
Image gaussian_blur(const Image& img, double sigma);

// Double-precision single-plane core used by gaussian_blur (and by tests
// that need the unquantized result).
std::vector<double> gaussian_blur_plane(const std::vector<double>& plane,
                                        int w, int h, double sigma);

// Paints every pixel whose center falls inside the polygon (even-odd rule):
// new = round(alpha*color + (1-alpha)*old), rounding half up. Grayscale
// targets blend against the BT.601 luma of `color`.
void fill_polygon_inplace(Image& img, const Polygon& poly, Rgb color,
                          double alpha);
Image fill_polygon(const Image& img, const Polygon& poly, Rgb color,
                   double alpha);

// Pastes `texture` (RGB), bilinearly stretched over the polygon's bounding
// box, onto the pixels inside the polygon. With `shading` on, a vertical
// factor fades 1.0 at the top of the box to 0.6 at the bottom.
void blit_textured_inplace(Image& img, const Polygon& poly,
                           const Image& texture, bool shading);
Image blit_textured(const Image& img, const Polygon& poly,
                    const Image& texture, bool shading);

}  // namespace occlu
