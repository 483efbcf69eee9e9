#include "occlu/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include <json.hpp>

namespace occlu {

bool LandmarkSet::all_inside(int w, int h) const {
  for (const Vec2& p : points) {
    if (!(p.x >= 0.0 && p.x < w && p.y >= 0.0 && p.y < h)) return false;
  }
  return true;
}

Box LandmarkSet::bounds() const {
  Box b{points[0].x, points[0].y, points[0].x, points[0].y};
  for (const Vec2& p : points) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

LandmarkTrack parse_landmarks(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open landmark file: " + path);
  LandmarkTrack track;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("frame") ||
        !j.contains("points") || !j["frame"].is_number_integer()) {
      throw FormatError(path + " line " + std::to_string(lineno) +
                        ": expected {\"frame\": int, \"points\": [[x,y]*68]}");
    }
    const int frame = j["frame"].get<int>();
    const auto& pts = j["points"];
    if (!pts.is_array() || pts.size() != LandmarkSet::kCount) {
      throw FormatError(path + ": frame " + std::to_string(frame) +
                        ": expected 68 points, got " +
                        std::to_string(pts.is_array() ? pts.size() : 0));
    }
    LandmarkSet lms;
    for (size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
          !p[1].is_number()) {
        throw FormatError(path + ": frame " + std::to_string(frame) +
                          ": non-numeric coordinate at point " +
                          std::to_string(i));
      }
      lms.points[i] = {p[0].get<double>(), p[1].get<double>()};
      if (!std::isfinite(lms.points[i].x) || !std::isfinite(lms.points[i].y)) {
        throw FormatError(path + ": frame " + std::to_string(frame) +
                          ": non-finite coordinate at point " +
                          std::to_string(i));
      }
    }
    track[frame] = lms;
  }
  return track;
}

void write_landmarks(const std::string& path, const LandmarkTrack& track) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open landmark file for writing: " + path);
  for (const auto& [frame, lms] : track) {
    nlohmann::ordered_json j;
    j["frame"] = frame;
    auto pts = nlohmann::ordered_json::array();
    for (const Vec2& p : lms.points) {
      pts.push_back(nlohmann::ordered_json::array({p.x, p.y}));
    }
    j["points"] = std::move(pts);
    f << j.dump() << "\n";
  }
  f.flush();
  if (!f) throw IoError("failed to write landmark file: " + path);
}

namespace {

inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

FaceRegion face_hull(const LandmarkSet& lms) {
  std::vector<Vec2> pts(lms.points.begin(), lms.points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  const size_t n = pts.size();
  std::vector<Vec2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  if (k < 1) throw InvalidInput("degenerate face: no landmark points");
  hull.resize(k - 1);  // last point repeats the first
  if (hull.size() < 3) throw InvalidInput("degenerate face: collinear landmarks");

  FaceRegion region;
  region.hull.pts = std::move(hull);
  double area2 = 0.0;
  const auto& h = region.hull.pts;
  for (size_t i = 0, j = h.size() - 1; i < h.size(); j = i++) {
    area2 += h[j].x * h[i].y - h[i].x * h[j].y;
  }
  region.area_px2 = std::abs(area2) / 2.0;
  if (region.area_px2 <= 0.0) {
    throw InvalidInput("degenerate face: zero-area hull");
  }
  region.bbox = region.hull.bbox();
  return region;
}

Image face_crop(const Image& img, const LandmarkSet& lms, int size) {
  if (size < 16) throw InvalidInput("face_crop: size must be >= 16");
  const FaceRegion region = face_hull(lms);
  const Box& bb = region.bbox;
  const Box ex{bb.min_x - kCropMargin * bb.width(),
               bb.min_y - kCropMargin * bb.height(),
               bb.max_x + kCropMargin * bb.width(),
               bb.max_y + kCropMargin * bb.height()};
  if (ex.max_x <= 0.0 || ex.min_x >= img.width || ex.max_y <= 0.0 ||
      ex.min_y >= img.height) {
    throw FaceOutsideFrame("face outside frame");
  }
  if (std::max(bb.width(), bb.height()) < kMinFaceSizePx) {
    throw FaceTooSmall("face below minimum size (" +
                       std::to_string(kMinFaceSizePx) + " px)");
  }
  const int x0 = std::clamp(static_cast<int>(std::floor(ex.min_x)), 0,
                            img.width - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor(ex.min_y)), 0,
                            img.height - 1);
  const int x1 = std::clamp(static_cast<int>(std::ceil(ex.max_x)), 0,
                            img.width - 1);
  const int y1 = std::clamp(static_cast<int>(std::ceil(ex.max_y)), 0,
                            img.height - 1);
  const Image gray = to_grayscale(img);
  Image crop(x1 - x0 + 1, y1 - y0 + 1, 1);
  for (int y = y0; y <= y1; ++y) {
    std::copy(gray.data.begin() + gray.index(x0, y),
              gray.data.begin() + gray.index(x1, y) + 1,
              crop.data.begin() + crop.index(0, y - y0));
  }
  return resize_bilinear(crop, size, size);
}

}  // namespace occlu
