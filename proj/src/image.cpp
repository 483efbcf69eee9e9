#include "occlu/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace occlu {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline uint8_t round_u8(double v) {
  double r = std::floor(v + 0.5);  // half rounds up
  if (r < 0.0) r = 0.0;
  if (r > 255.0) r = 255.0;
  return static_cast<uint8_t>(r);
}

inline double luma(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

}  // namespace

Box Polygon::bbox() const {
  Box b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
        std::numeric_limits<double>::lowest(),
        std::numeric_limits<double>::lowest()};
  for (const Vec2& p : pts) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

Polygon ellipse_polygon(double cx, double cy, double rx, double ry, int n) {
  if (n < 3) throw InvalidInput("ellipse_polygon: need at least 3 vertices");
  Polygon poly;
  poly.pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * kPi * i / n;
    poly.pts.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
  }
  return poly;
}

bool point_in_polygon(const Polygon& poly, double x, double y) {
  const auto& p = poly.pts;
  bool inside = false;
  for (size_t i = 0, j = p.size() - 1; i < p.size(); j = i++) {
    if ((p[i].y > y) != (p[j].y > y)) {
      double t = (y - p[j].y) / (p[i].y - p[j].y);
      double cross_x = p[j].x + t * (p[i].x - p[j].x);
      if (x < cross_x) inside = !inside;
    }
  }
  return inside;
}

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
bool next_token(const std::string& s, size_t& pos, std::string& tok) {
  for (;;) {
    while (pos < s.size() &&
           std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    }
    if (pos < s.size() && s[pos] == '#') {
      while (pos < s.size() && s[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  if (pos >= s.size()) return false;
  size_t start = pos;
  while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos]))) {
    ++pos;
  }
  tok = s.substr(start, pos - start);
  return true;
}

long parse_uint(const std::string& tok) {
  if (tok.empty() || tok.size() > 9) return -1;
  long v = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9') return -1;
    v = v * 10 + (ch - '0');
  }
  return v;
}

}  // namespace

Image load_image(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open image file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  if (bytes.size() < 2) throw FormatError("malformed header: " + path);
  const std::string magic = bytes.substr(0, 2);
  int channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw FormatError("unsupported format (want binary PGM/PPM): " + path);
  }
  size_t pos = 2;
  std::string tw, th, tm;
  if (!next_token(bytes, pos, tw) || !next_token(bytes, pos, th) ||
      !next_token(bytes, pos, tm)) {
    throw FormatError("malformed header: " + path);
  }
  long w = parse_uint(tw), h = parse_uint(th), maxval = parse_uint(tm);
  if (w <= 0 || h <= 0 || maxval <= 0 || w > 100000 || h > 100000) {
    throw FormatError("malformed header: " + path);
  }
  if (maxval != 255) {
    throw FormatError("unsupported bit depth (maxval " + tm + "): " + path);
  }
  ++pos;  // exactly one whitespace byte separates the header from the data
  const size_t need = static_cast<size_t>(w) * h * channels;
  if (pos > bytes.size() || bytes.size() - pos < need) {
    throw FormatError("truncated pixel data: " + path);
  }
  Image img(static_cast<int>(w), static_cast<int>(h), channels);
  std::memcpy(img.data.data(), bytes.data() + pos, need);
  return img;
}

void save_image(const Image& img, const std::string& path) {
  if (img.channels != 1 && img.channels != 3) {
    throw InvalidInput("save_image: image must have 1 or 3 channels");
  }
  if (img.width <= 0 || img.height <= 0 ||
      img.data.size() !=
          static_cast<size_t>(img.width) * img.height * img.channels) {
    throw InvalidInput("save_image: inconsistent image dimensions");
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open file for writing: " + path);
  f << (img.channels == 1 ? "P5" : "P6") << "\n"
    << img.width << " " << img.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  f.flush();
  if (!f) throw IoError("failed to write image: " + path);
}

Image to_grayscale(const Image& img) {
  if (img.channels == 1) return img;
  if (img.channels != 3) {
    throw InvalidInput("to_grayscale: image must have 1 or 3 channels");
  }
  Image out(img.width, img.height, 1);
  const uint8_t* s = img.data.data();
  const size_t n = static_cast<size_t>(img.width) * img.height;
  for (size_t i = 0; i < n; ++i) {
    out.data[i] = round_u8(luma(s[3 * i], s[3 * i + 1], s[3 * i + 2]));
  }
  return out;
}

Image resize_bilinear(const Image& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) {
    throw InvalidInput("resize_bilinear: target size must be >= 1");
  }
  if (img.width < 1 || img.height < 1) {
    throw InvalidInput("resize_bilinear: empty source image");
  }
  Image out(out_w, out_h, img.channels);
  const double sx = static_cast<double>(img.width) / out_w;
  const double sy = static_cast<double>(img.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    const int y0 = static_cast<int>(std::floor(fy));
    const double ty = fy - y0;
    const int ya = std::clamp(y0, 0, img.height - 1);
    const int yb = std::clamp(y0 + 1, 0, img.height - 1);
    for (int x = 0; x < out_w; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      const int x0 = static_cast<int>(std::floor(fx));
      const double tx = fx - x0;
      const int xa = std::clamp(x0, 0, img.width - 1);
      const int xb = std::clamp(x0 + 1, 0, img.width - 1);
      for (int c = 0; c < img.channels; ++c) {
        const double top =
            (1.0 - tx) * img.at(xa, ya, c) + tx * img.at(xb, ya, c);
        const double bot =
            (1.0 - tx) * img.at(xa, yb, c) + tx * img.at(xb, yb, c);
        out.at(x, y, c) = round_u8((1.0 - ty) * top + ty * bot);
      }
    }
  }
  return out;
}

std::vector<double> gaussian_blur_plane(const std::vector<double>& plane,
                                        int w, int h, double sigma) {
  if (sigma <= 0.0) throw InvalidInput("gaussian_blur: sigma must be > 0");
  if (w < 1 || h < 1 || plane.size() != static_cast<size_t>(w) * h) {
    throw InvalidInput("gaussian_blur: inconsistent plane dimensions");
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;

  std::vector<double> tmp(plane.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += k[i + radius] *
               plane[static_cast<size_t>(y) * w + std::clamp(x + i, 0, w - 1)];
      }
      tmp[static_cast<size_t>(y) * w + x] = acc;
    }
  }
  std::vector<double> out(plane.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += k[i + radius] *
               tmp[static_cast<size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
      }
      out[static_cast<size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

Image gaussian_blur(const Image& img, double sigma) {
  if (sigma <= 0.0) throw InvalidInput("gaussian_blur: sigma must be > 0");
  Image out(img.width, img.height, img.channels);
  const size_t n = static_cast<size_t>(img.width) * img.height;
  std::vector<double> plane(n);
  for (int c = 0; c < img.channels; ++c) {
    for (size_t i = 0; i < n; ++i) {
      plane[i] = img.data[i * img.channels + c];
    }
    std::vector<double> blurred =
        gaussian_blur_plane(plane, img.width, img.height, sigma);
    for (size_t i = 0; i < n; ++i) {
      out.data[i * img.channels + c] = round_u8(blurred[i]);
    }
  }
  return out;
}

namespace {

// Clips a polygon's bbox to the pixel grid, with one pixel of slop.
struct PixelRange {
  int x0, x1, y0, y1;
  bool empty;
};

PixelRange pixel_range(const Box& bb, const Image& img) {
  PixelRange r{};
  r.x0 = std::max(0, static_cast<int>(std::floor(bb.min_x)) - 1);
  r.y0 = std::max(0, static_cast<int>(std::floor(bb.min_y)) - 1);
  r.x1 = std::min(img.width - 1, static_cast<int>(std::ceil(bb.max_x)) + 1);
  r.y1 = std::min(img.height - 1, static_cast<int>(std::ceil(bb.max_y)) + 1);
  r.empty = r.x0 > r.x1 || r.y0 > r.y1;
  return r;
}

}  // namespace

void fill_polygon_inplace(Image& img, const Polygon& poly, Rgb color,
                          double alpha) {
  if (poly.pts.size() < 3) {
    throw InvalidInput("fill_polygon: polygon needs at least 3 vertices");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidInput("fill_polygon: alpha must be in [0,1]");
  }
  const double col[3] = {static_cast<double>(color[0]),
                         static_cast<double>(color[1]),
                         static_cast<double>(color[2])};
  const double gray = luma(col[0], col[1], col[2]);
  const PixelRange r = pixel_range(poly.bbox(), img);
  if (r.empty) return;
  for (int y = r.y0; y <= r.y1; ++y) {
    for (int x = r.x0; x <= r.x1; ++x) {
      if (!point_in_polygon(poly, x + 0.5, y + 0.5)) continue;
      if (img.channels == 1) {
        img.at(x, y) = round_u8(alpha * gray + (1.0 - alpha) * img.at(x, y));
      } else {
        for (int c = 0; c < img.channels; ++c) {
          img.at(x, y, c) =
              round_u8(alpha * col[c] + (1.0 - alpha) * img.at(x, y, c));
        }
      }
    }
  }
}

Image fill_polygon(const Image& img, const Polygon& poly, Rgb color,
                   double alpha) {
  Image out = img;
  fill_polygon_inplace(out, poly, color, alpha);
  return out;
}

namespace {

double sample_texture(const Image& tex, int c, double fx, double fy) {
  const int x0 = static_cast<int>(std::floor(fx));
  const int y0 = static_cast<int>(std::floor(fy));
  const double tx = fx - x0;
  const double ty = fy - y0;
  const int xa = std::clamp(x0, 0, tex.width - 1);
  const int xb = std::clamp(x0 + 1, 0, tex.width - 1);
  const int ya = std::clamp(y0, 0, tex.height - 1);
  const int yb = std::clamp(y0 + 1, 0, tex.height - 1);
  const double top = (1.0 - tx) * tex.at(xa, ya, c) + tx * tex.at(xb, ya, c);
  const double bot = (1.0 - tx) * tex.at(xa, yb, c) + tx * tex.at(xb, yb, c);
  return (1.0 - ty) * top + ty * bot;
}

}  // namespace

void blit_textured_inplace(Image& img, const Polygon& poly,
                           const Image& texture, bool shading) {
  if (poly.pts.size() < 3) {
    throw InvalidInput("blit_textured: polygon needs at least 3 vertices");
  }
  if (texture.channels != 3 || texture.width < 1 || texture.height < 1) {
    throw InvalidInput("blit_textured: texture must be a non-empty RGB image");
  }
  const Box bb = poly.bbox();
  if (bb.width() <= 0.0 || bb.height() <= 0.0) return;
  const PixelRange r = pixel_range(bb, img);
  if (r.empty) return;
  for (int y = r.y0; y <= r.y1; ++y) {
    for (int x = r.x0; x <= r.x1; ++x) {
      const double cx = x + 0.5, cy = y + 0.5;
      if (!point_in_polygon(poly, cx, cy)) continue;
      const double u = std::clamp((cx - bb.min_x) / bb.width(), 0.0, 1.0);
      const double v = std::clamp((cy - bb.min_y) / bb.height(), 0.0, 1.0);
      const double fx = u * texture.width - 0.5;
      const double fy = v * texture.height - 0.5;
      const double shade = shading ? (1.0 - 0.4 * v) : 1.0;
      if (img.channels == 1) {
        const double t = luma(sample_texture(texture, 0, fx, fy),
                              sample_texture(texture, 1, fx, fy),
                              sample_texture(texture, 2, fx, fy));
        img.at(x, y) = round_u8(shade * t);
      } else {
        for (int c = 0; c < img.channels; ++c) {
          img.at(x, y, c) = round_u8(shade * sample_texture(texture, c, fx, fy));
        }
      }
    }
  }
}

Image blit_textured(const Image& img, const Polygon& poly,
                    const Image& texture, bool shading) {
  Image out = img;
  blit_textured_inplace(out, poly, texture, shading);
  return out;
}

}  // namespace occlu
