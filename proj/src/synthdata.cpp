#include "occlu/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <set>

namespace fs = std::filesystem;

namespace occlu {

namespace {

constexpr double kPi = 3.14159265358979323846;

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Thin deterministic wrapper; avoids std distributions, whose output is
// implementation-defined.
struct Rng {
  std::mt19937_64 g;
  explicit Rng(uint64_t seed) : g(seed) {}
  double uni() {  // [0, 1)
    return (g() >> 11) * (1.0 / 9007199254740992.0);
  }
  double range(double a, double b) { return a + (b - a) * uni(); }
  int irange(int a, int b) {  // inclusive ends
    return a + static_cast<int>(g() % static_cast<uint64_t>(b - a + 1));
  }
};

// ---- face geometry ----------------------------------------------------
//
// The template lives in face-box units: x in [0,1] across the face, y = 0 at
// the brow line and y = 1 at the chin. The jaw is a half-ellipse centered at
// (0.5, 0.12) with semi-axes (0.5, 0.88); the feature heights below were
// calibrated so the mask cut lines produce their intended coverage bands.

constexpr double kJawCy = 0.12;
constexpr double kJawRy = 0.88;
const double kJawAnglesDeg[17] = {0,   22,  38,  42,  46,  55,  64,  76, 90,
                                  104, 116, 125, 134, 138, 142, 158, 180};

struct FaceShape {
  double eye_y = 0.22;
  double nose_bridge_y = 0.296;  // landmark 28
  double nose_mid_y = 0.371;     // landmark 29
  double nose_tip_y = 0.446;     // landmark 30
  double subnasale_y = 0.557;    // landmark 33
  double mouth_y = 0.72;
};

LandmarkSet layout_landmarks(const FaceShape& s, double fx, double fy,
                             double w, double h) {
  LandmarkSet lms;
  auto put = [&](int i, double x, double y) {
    lms.points[i] = {fx + x * w, fy + y * h};
  };
  for (int i = 0; i < 17; ++i) {
    const double a = kJawAnglesDeg[i] * kPi / 180.0;
    put(i, 0.5 - 0.5 * std::cos(a), kJawCy + kJawRy * std::sin(a));
  }
  // brows
  const double bl[5][2] = {{0.17, 0.06}, {0.22, 0.01}, {0.29, 0.00},
                           {0.36, 0.02}, {0.42, 0.05}};
  for (int i = 0; i < 5; ++i) put(17 + i, bl[i][0], bl[i][1]);
  for (int i = 0; i < 5; ++i) put(22 + i, 1.0 - bl[4 - i][0], bl[4 - i][1]);
  // nose bridge 27-30 and base 31-35
  put(27, 0.5, s.eye_y);
  put(28, 0.5, s.nose_bridge_y);
  put(29, 0.5, s.nose_mid_y);
  put(30, 0.5, s.nose_tip_y);
  const double base_hi = s.subnasale_y - 0.032;
  const double base_mid = s.subnasale_y - 0.012;
  put(31, 0.42, base_hi);
  put(32, 0.46, base_mid);
  put(33, 0.50, s.subnasale_y);
  put(34, 0.54, base_mid);
  put(35, 0.58, base_hi);
  // eyes around (0.30, eye_y) and mirrored
  const double ey = s.eye_y;
  const double el[6][2] = {{0.23, 0.0},  {0.26, -0.025}, {0.33, -0.025},
                           {0.37, 0.0},  {0.33, 0.025},  {0.26, 0.025}};
  for (int i = 0; i < 6; ++i) put(36 + i, el[i][0], ey + el[i][1]);
  const double er[6][2] = {{0.63, 0.0},  {0.67, -0.025}, {0.74, -0.025},
                           {0.77, 0.0},  {0.74, 0.025},  {0.67, 0.025}};
  for (int i = 0; i < 6; ++i) put(42 + i, er[i][0], ey + er[i][1]);
  // mouth: outer ring 48-59, inner ring 60-67
  const double my = s.mouth_y;
  const double mo[12][2] = {{0.34, 0.0},   {0.38, -0.035}, {0.44, -0.055},
                            {0.50, -0.06}, {0.56, -0.055}, {0.62, -0.035},
                            {0.66, 0.0},   {0.62, 0.035},  {0.56, 0.055},
                            {0.50, 0.06},  {0.44, 0.055},  {0.38, 0.035}};
  for (int i = 0; i < 12; ++i) put(48 + i, mo[i][0], my + mo[i][1]);
  const double mi[8][2] = {{0.38, 0.0},   {0.44, -0.02}, {0.50, -0.025},
                           {0.56, -0.02}, {0.62, 0.0},   {0.56, 0.02},
                           {0.50, 0.025}, {0.44, 0.02}};
  for (int i = 0; i < 8; ++i) put(60 + i, mi[i][0], my + mi[i][1]);
  return lms;
}

// ---- per-subject appearance --------------------------------------------

struct SubjectParams {
  FaceShape shape;
  double face_x = 0.0, face_y = 0.0;  // face box origin, pixels
  double face_w = 0.0, face_h = 0.0;
  Rgb skin{205, 170, 148};
  Rgb bg_top{90, 95, 105};
  Rgb bg_bottom{120, 125, 135};
  struct BgRect {
    double x, y, w, h;
    Rgb color;
  };
  std::vector<BgRect> bg_rects;
  struct NoiseWave {
    double fx, fy, phase, amp;
  };
  std::vector<NoiseWave> waves;
  uint64_t grain_seed = 0;
  double grain_amp = 0.0;
  uint64_t bg_grain_seed = 0;
};

double grain_value(uint64_t seed, int64_t gx, int64_t gy) {  // in [-1, 1)
  const uint64_t hash = splitmix64(
      seed ^ splitmix64((static_cast<uint64_t>(gx) << 32) ^
                        (static_cast<uint64_t>(gy) & 0xFFFFFFFFull)));
  return (hash >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

uint8_t jitter_channel(Rng& rng, int base, int spread) {
  return static_cast<uint8_t>(
      std::clamp(base + rng.irange(-spread, spread), 0, 255));
}

uint8_t shift_channel(uint8_t v, int delta) {
  return static_cast<uint8_t>(std::clamp(int(v) + delta, 0, 255));
}

SubjectParams sample_subject(Rng& rng, int img_w, int img_h) {
  SubjectParams p;
  p.skin = {jitter_channel(rng, 205, 10), jitter_channel(rng, 170, 10),
            jitter_channel(rng, 148, 10)};
  p.bg_top = {jitter_channel(rng, 88, 14), jitter_channel(rng, 94, 14),
              jitter_channel(rng, 106, 14)};
  p.bg_bottom = {jitter_channel(rng, 122, 14), jitter_channel(rng, 126, 14),
                 jitter_channel(rng, 136, 14)};
  for (int i = 0; i < 3; ++i) {
    SubjectParams::BgRect r;
    r.w = rng.range(0.10, 0.28) * img_w;
    r.h = rng.range(0.10, 0.30) * img_h;
    r.x = rng.range(0.0, img_w - r.w);
    r.y = rng.range(0.0, img_h - r.h);
    r.color = {jitter_channel(rng, 110, 45), jitter_channel(rng, 105, 45),
               jitter_channel(rng, 100, 45)};
    p.bg_rects.push_back(r);
  }
  // Low-frequency skin shading: a handful of plane waves with wavelengths of
  // 6-14 px. The band is deliberately narrow across subjects so bonafide
  // texture statistics form one tight mode.
  for (int i = 0; i < 5; ++i) {
    const double lambda = rng.range(6.0, 14.0);
    const double theta = rng.range(0.0, 2.0 * kPi);
    SubjectParams::NoiseWave wv;
    wv.fx = 2.0 * kPi / lambda * std::cos(theta);
    wv.fy = 2.0 * kPi / lambda * std::sin(theta);
    wv.phase = rng.range(0.0, 2.0 * kPi);
    wv.amp = rng.range(3.2, 4.8);
    p.waves.push_back(wv);
  }
  p.face_h = rng.range(172.0, 200.0);
  p.face_w = 0.72 * p.face_h;
  p.face_x = img_w / 2.0 - p.face_w / 2.0 + rng.range(-8.0, 8.0);
  p.face_y = img_h / 2.0 - p.face_h / 2.0 + rng.range(-6.0, 10.0);
  // mild per-subject proportion variation; small enough to keep the mask
  // coverage bands intact
  p.shape.eye_y += rng.range(-0.006, 0.006);
  p.shape.nose_bridge_y += rng.range(-0.008, 0.008);
  p.shape.nose_mid_y += rng.range(-0.006, 0.006);
  p.shape.nose_tip_y += rng.range(-0.008, 0.008);
  p.shape.subnasale_y += rng.range(-0.008, 0.008);
  p.shape.mouth_y += rng.range(-0.010, 0.010);
  // Pixel-scale sensor/skin grain. Live captures keep it; the recapture
  // transforms smooth it away, which is exactly the cue the texture and
  // image-quality pipelines are meant to pick up.
  p.grain_seed = rng.g();
  p.grain_amp = rng.range(16.0, 22.0);
  p.bg_grain_seed = rng.g();
  return p;
}

// ---- rendering ----------------------------------------------------------

void render_background(Image& img, const SubjectParams& p) {
  for (int y = 0; y < img.height; ++y) {
    const double t = img.height > 1 ? double(y) / (img.height - 1) : 0.0;
    for (int c = 0; c < 3; ++c) {
      const uint8_t v = static_cast<uint8_t>(std::lround(
          (1.0 - t) * p.bg_top[c] + t * p.bg_bottom[c]));
      for (int x = 0; x < img.width; ++x) img.at(x, y, c) = v;
    }
  }
  for (const auto& r : p.bg_rects) {
    Polygon quad;
    quad.pts = {{r.x, r.y}, {r.x + r.w, r.y}, {r.x + r.w, r.y + r.h},
                {r.x, r.y + r.h}};
    fill_polygon_inplace(img, quad, r.color, 1.0);
  }
  // static sensor grain over the scene; unlike the face grain it does not
  // move between frames, so it adds no spurious motion
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double n = 14.0 * grain_value(p.bg_grain_seed, x, y);
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = static_cast<uint8_t>(
            std::clamp(std::lround(img.at(x, y, c) + n), 0l, 255l));
      }
    }
  }
}

void render_face(Image& img, const SubjectParams& p, const LandmarkSet& lms,
                 double dx, double dy) {
  const double fx = p.face_x + dx, fy = p.face_y + dy;
  const double w = p.face_w, h = p.face_h;
  auto at = [&](double x, double y) -> Vec2 {
    return {fx + x * w, fy + y * h};
  };

  // head
  const Vec2 hc = at(0.5, 0.36);
  fill_polygon_inplace(img, ellipse_polygon(hc.x, hc.y, 0.55 * w, 0.65 * h, 64),
                       p.skin, 1.0);
  // brows
  for (int side = 0; side < 2; ++side) {
    const int base = side == 0 ? 17 : 22;
    Polygon strip;
    const double th = 0.012 * h;
    for (int i = 0; i < 5; ++i) {
      strip.pts.push_back({lms.points[base + i].x, lms.points[base + i].y - th});
    }
    for (int i = 4; i >= 0; --i) {
      strip.pts.push_back({lms.points[base + i].x, lms.points[base + i].y + th});
    }
    fill_polygon_inplace(img, strip, Rgb{70, 52, 44}, 1.0);
  }
  // eyes: sclera, iris, pupil centered on each eye group
  for (int side = 0; side < 2; ++side) {
    const int base = side == 0 ? 36 : 42;
    double cx = 0.0, cy = 0.0;
    for (int i = 0; i < 6; ++i) {
      cx += lms.points[base + i].x;
      cy += lms.points[base + i].y;
    }
    cx /= 6.0;
    cy /= 6.0;
    fill_polygon_inplace(img, ellipse_polygon(cx, cy, 0.075 * w, 0.030 * h, 32),
                         Rgb{232, 230, 226}, 1.0);
    fill_polygon_inplace(img, ellipse_polygon(cx, cy, 0.030 * w, 0.030 * w, 24),
                         Rgb{72, 48, 36}, 1.0);
    fill_polygon_inplace(img, ellipse_polygon(cx, cy, 0.012 * w, 0.012 * w, 16),
                         Rgb{26, 20, 18}, 1.0);
  }
  // nose: bridge highlight, nostrils, subnasale shadow
  {
    Polygon bridge;
    const double bx = 0.013 * w;
    const Vec2 a = at(0.5 - 0.013, 0.24), b = at(0.5 + 0.013, 0.24);
    const Vec2 c = {lms.points[30].x + bx, lms.points[30].y};
    const Vec2 d = {lms.points[30].x - bx, lms.points[30].y};
    bridge.pts = {a, b, c, d};
    const Rgb hi{shift_channel(p.skin[0], 18), shift_channel(p.skin[1], 18),
                 shift_channel(p.skin[2], 18)};
    fill_polygon_inplace(img, bridge, hi, 1.0);
    const Rgb dark{shift_channel(p.skin[0], -55), shift_channel(p.skin[1], -55),
                   shift_channel(p.skin[2], -55)};
    const Vec2 nl = at(0.44, 0.535), nr = at(0.56, 0.535);
    fill_polygon_inplace(img,
                         ellipse_polygon(nl.x, nl.y, 0.016 * w, 0.012 * h, 16),
                         dark, 1.0);
    fill_polygon_inplace(img,
                         ellipse_polygon(nr.x, nr.y, 0.016 * w, 0.012 * h, 16),
                         dark, 1.0);
  }
  // mouth
  {
    Polygon outer;
    for (int i = 48; i < 60; ++i) outer.pts.push_back(lms.points[i]);
    fill_polygon_inplace(img, outer, Rgb{168, 85, 82}, 1.0);
    Polygon inner;
    for (int i = 60; i < 68; ++i) inner.pts.push_back(lms.points[i]);
    fill_polygon_inplace(img, inner, Rgb{120, 52, 54}, 1.0);
  }
  // skin texture over the whole head, attached to face coordinates
  {
    const double rx = 0.55 * w, ry = 0.65 * h;
    const int x0 = std::max(0, static_cast<int>(std::floor(hc.x - rx)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(hc.x + rx)));
    const int y0 = std::max(0, static_cast<int>(std::floor(hc.y - ry)));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(hc.y + ry)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double ex = (x + 0.5 - hc.x) / rx;
        const double ey = (y + 0.5 - hc.y) / ry;
        if (ex * ex + ey * ey > 1.0) continue;
        const double lx = x + 0.5 - fx, ly = y + 0.5 - fy;
        double n = 0.0;
        for (const auto& wv : p.waves) {
          n += wv.amp * std::cos(wv.fx * lx + wv.fy * ly + wv.phase);
        }
        // grain sampled on a lattice attached to the face, so it rides along
        // with the per-frame head motion; stubble-like, so it is much
        // stronger over the lower face than on the forehead
        const double ramp =
            std::clamp((ly / h - 0.30) / 0.15, 0.0, 1.0);
        n += p.grain_amp * (0.22 + 0.78 * ramp) *
             grain_value(p.grain_seed, static_cast<int64_t>(std::floor(lx)),
                         static_cast<int64_t>(std::floor(ly)));
        for (int c = 0; c < 3; ++c) {
          const double v = img.at(x, y, c) + n;
          img.at(x, y, c) = static_cast<uint8_t>(
              std::clamp(std::lround(v), 0l, 255l));
        }
      }
    }
  }
}

}  // namespace

namespace {

Image translate_clamped(const Image& img, int dx, int dy) {
  Image out(img.width, img.height, img.channels);
  for (int y = 0; y < img.height; ++y) {
    const int sy = std::clamp(y - dy, 0, img.height - 1);
    for (int x = 0; x < img.width; ++x) {
      const int sx = std::clamp(x - dx, 0, img.width - 1);
      for (int c = 0; c < img.channels; ++c) {
        out.at(x, y, c) = img.at(sx, sy, c);
      }
    }
  }
  return out;
}

}  // namespace

Image print_recapture(const Image& frame) {
  const int hw = std::max(1, frame.width / 2);
  const int hh = std::max(1, frame.height / 2);
  Image down = resize_bilinear(frame, hw, hh);
  Image up = resize_bilinear(down, frame.width, frame.height);
  Image soft = gaussian_blur(up, 1.2);
  for (uint8_t& v : soft.data) {
    // ink never reaches full black or white, and the tonal resolution of a
    // printed page is coarse: compress contrast, then quantize to 16 levels
    const double c = (v - 128.0) * 0.8 + 128.0;
    const double q = std::floor(c / 16.0) * 16.0 + 8.0;
    v = static_cast<uint8_t>(std::clamp(q, 0.0, 255.0));
  }
  return soft;
}

Image replay_recapture(const Image& frame, int frame_index) {
  Image out = print_recapture(frame);
  // Screen-style artifacts on top of the recapture: horizontal interference
  // bands with a slow per-frame phase drift, plus pixel-grid moire speckle.
  // The speckle makes replays noticeably noisier than live capture, while
  // prints stay noticeably flatter - so neither "smooth means attack" nor
  // "noisy means attack" works on its own.
  for (int y = 0; y < out.height; ++y) {
    const double m =
        10.0 * std::sin(2.0 * kPi * (y + 0.7 * frame_index) / 4.5);
    for (int x = 0; x < out.width; ++x) {
      const double s =
          18.0 * grain_value(0x5C4EE9B1ull + static_cast<uint64_t>(frame_index),
                             x, y);
      for (int c = 0; c < out.channels; ++c) {
        const double v = out.at(x, y, c) + m + s;
        out.at(x, y, c) =
            static_cast<uint8_t>(std::clamp(std::lround(v), 0l, 255l));
      }
    }
  }
  return out;
}

LandmarkSet reference_landmarks(int img_w, int img_h) {
  FaceShape shape;
  const double h = 0.58 * img_h;
  const double w = 0.72 * h;
  return layout_landmarks(shape, img_w / 2.0 - w / 2.0, img_h / 2.0 - h / 2.0,
                          w, h);
}

std::vector<LandmarkSet> sample_landmark_corpus(uint64_t seed, int n,
                                                int img_w, int img_h) {
  std::vector<LandmarkSet> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Rng rng(splitmix64(seed ^ splitmix64(static_cast<uint64_t>(i) + 1)));
    const SubjectParams p = sample_subject(rng, img_w, img_h);
    out.push_back(
        layout_landmarks(p.shape, p.face_x, p.face_y, p.face_w, p.face_h));
  }
  return out;
}

std::vector<ManifestEntry> generate_corpus(const SynthConfig& cfg) {
  if (cfg.n_subjects < 1) throw InvalidInput("synth: need at least 1 subject");
  if (cfg.frames_per_video < 1) {
    throw InvalidInput("synth: need at least 1 frame per video");
  }
  if (cfg.width < 64 || cfg.height < 64) {
    throw InvalidInput("synth: frame size must be at least 64x64");
  }
  for (const std::string& kind : cfg.attack_kinds) {
    if (kind != "print" && kind != "replay") {
      throw InvalidInput("synth: unknown attack kind: " + kind);
    }
  }
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec || !fs::is_directory(cfg.out_dir)) {
    throw IoError("cannot create output directory: " + cfg.out_dir);
  }

  std::vector<ManifestEntry> entries;
  char buf[64];
  for (int s = 0; s < cfg.n_subjects; ++s) {
    std::snprintf(buf, sizeof buf, "s%03d", s);
    const std::string subject = buf;
    Rng rng(splitmix64(cfg.seed ^ splitmix64(static_cast<uint64_t>(s) + 1)));
    const SubjectParams params = sample_subject(rng, cfg.width, cfg.height);

    std::vector<Image> frames;
    LandmarkTrack track;
    for (int t = 0; t < cfg.frames_per_video; ++t) {
      const double dx = rng.range(-2.0, 2.0);
      const double dy = rng.range(-2.0, 2.0);
      const LandmarkSet lms =
          layout_landmarks(params.shape, params.face_x + dx,
                           params.face_y + dy, params.face_w, params.face_h);
      Image img(cfg.width, cfg.height, 3);
      render_background(img, params);
      render_face(img, params, lms, dx, dy);
      frames.push_back(std::move(img));
      track[t] = lms;
    }

    auto write_video = [&](const std::string& kind_tag,
                           const std::vector<Image>& video_frames,
                           const LandmarkTrack& video_track) {
      const std::string vid = subject + "_" + kind_tag;
      const fs::path dir = fs::path(cfg.out_dir) / vid;
      fs::create_directories(dir, ec);
      if (ec) throw IoError("cannot create video directory: " + dir.string());
      for (size_t t = 0; t < video_frames.size(); ++t) {
        std::snprintf(buf, sizeof buf, "frame_%04zu.ppm", t);
        save_image(video_frames[t], (dir / buf).string());
      }
      write_landmarks((dir / "landmarks.jsonl").string(), video_track);
      ManifestEntry e;
      e.id = vid;
      e.frames_dir = vid;
      e.landmarks_path = vid + "/landmarks.jsonl";
      e.label = kind_tag == "bonafide" ? "bonafide" : "attack";
      e.attack_kind = kind_tag == "bonafide" ? "" : kind_tag;
      e.subject = subject;
      entries.push_back(std::move(e));
    };

    write_video("bonafide", frames, track);
    for (const std::string& kind : cfg.attack_kinds) {
      std::vector<Image> attacked;
      LandmarkTrack attacked_track;
      attacked.reserve(frames.size());
      if (kind == "print") {
        // a frozen printout held up by hand: one source frame, whole-image
        // shake, landmarks ride along with the shake
        const Image base = print_recapture(frames[0]);
        for (int t = 0; t < cfg.frames_per_video; ++t) {
          const int dx = rng.irange(-1, 1);
          const int dy = rng.irange(-1, 1);
          attacked.push_back(translate_clamped(base, dx, dy));
          LandmarkSet lms = track.at(0);
          for (Vec2& p : lms.points) {
            p.x += dx;
            p.y += dy;
          }
          attacked_track[t] = lms;
        }
      } else {
        // a screen replaying the capture: source motion survives, plus
        // interference bands that drift frame to frame
        for (int t = 0; t < cfg.frames_per_video; ++t) {
          attacked.push_back(replay_recapture(frames[t], t));
        }
        attacked_track = track;
      }
      write_video(kind, attacked, attacked_track);
    }
  }
  write_manifest((fs::path(cfg.out_dir) / "manifest.jsonl").string(), entries);
  return entries;
}

void split_protocol(std::vector<ManifestEntry>& entries, SplitRatios ratios,
                    uint64_t seed) {
  if (!(ratios.train > 0.0 && ratios.dev > 0.0 && ratios.test > 0.0)) {
    throw InvalidInput("split: all ratios must be positive");
  }
  std::vector<std::string> subjects;
  std::set<std::string> seen;
  for (const ManifestEntry& e : entries) {
    if (seen.insert(e.subject).second) subjects.push_back(e.subject);
  }
  std::sort(subjects.begin(), subjects.end());
  Rng rng(splitmix64(seed ^ 0xA5C1E5ull));
  for (size_t i = subjects.size(); i > 1; --i) {  // Fisher-Yates
    const size_t j = static_cast<size_t>(rng.irange(0, static_cast<int>(i) - 1));
    std::swap(subjects[i - 1], subjects[j]);
  }
  const int n = static_cast<int>(subjects.size());
  const int n_train = static_cast<int>(std::floor(ratios.train * n));
  const int n_dev = static_cast<int>(std::floor(ratios.dev * n));
  const int n_test = n - n_train - n_dev;
  if (n_train < 1 || n_dev < 1 || n_test < 1) {
    throw InvalidInput("split: too few subjects for a " +
                       std::to_string(n) + "-subject three-way split");
  }
  std::map<std::string, std::string> part;
  for (int i = 0; i < n; ++i) {
    part[subjects[i]] =
        i < n_train ? "train" : (i < n_train + n_dev ? "dev" : "test");
  }
  for (ManifestEntry& e : entries) e.partition = part.at(e.subject);
}

}  // namespace occlu
