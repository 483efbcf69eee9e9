#pragma once

#include <array>
#include <map>
#include <string>

#include "occlu/image.hpp"

namespace occlu {

// 68-point face annotation in the common dlib ordering:
//   0-16  jaw (viewer-left ear, around the chin, to viewer-right ear)
//   17-26 brows, 27-35 nose (27-30 bridge, 31-35 base, 33 subnasale)
//   36-41 / 42-47 eyes, 48-67 mouth (48-59 outer lip, 60-67 inner lip)
struct LandmarkSet {
  static constexpr int kCount = 68;
  std::array<Vec2, kCount> points{};

  // True when every point lies inside [0,w) x [0,h). Points slightly outside
  // the frame are legal input; this flags them for the caller.
  bool all_inside(int w, int h) const;
  // Bounding box of the 68 points.
  Box bounds() const;
};

// Convex hull of the landmark points plus derived quantities.
struct FaceRegion {
  Polygon hull;    // counter-clockwise in image coordinates
  Box bbox;        // of the hull
  double area_px2 = 0.0;
};

// frame index -> landmark set; frames with no entry are simply absent.
using LandmarkTrack = std::map<int, LandmarkSet>;

// JSON Lines: {"frame": int, "points": [[x, y] * 68]} per line.
LandmarkTrack parse_landmarks(const std::string& path);
void write_landmarks(const std::string& path, const LandmarkTrack& track);

// Convex hull (monotone chain) with the polygon area from the shoelace
// formula. All-collinear input is rejected ("degenerate face").
FaceRegion face_hull(const LandmarkSet& lms);

// Faces whose raw bounding box is smaller than this (larger side, pixels)
// are rejected with FaceTooSmall so pipelines can skip the frame.
constexpr int kMinFaceSizePx = 64;
constexpr double kCropMargin = 0.10;

// Grayscale square crop of the hull bbox expanded by kCropMargin on every
// side, clamped to the frame, then resized to size x size. size must be
// >= 16.
Image face_crop(const Image& img, const LandmarkSet& lms, int size);

}  // namespace occlu
