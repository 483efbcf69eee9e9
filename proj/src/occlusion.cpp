#include "occlu/occlusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "occlu/error.hpp"

namespace fs = std::filesystem;

namespace occlu {

namespace {

constexpr Rgb kFlatMaskColor{172, 186, 196};

double dist(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Image make_stripes(int period, Rgb a, Rgb b) {
  Image t(64, 64, 3);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const Rgb& c = ((x + y) / period) % 2 == 0 ? a : b;
      for (int ch = 0; ch < 3; ++ch) t.at(x, y, ch) = c[ch];
    }
  }
  return t;
}

Image make_checker(int cell, Rgb a, Rgb b) {
  Image t(64, 64, 3);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const Rgb& c = ((x / cell) ^ (y / cell)) & 1 ? a : b;
      for (int ch = 0; ch < 3; ++ch) t.at(x, y, ch) = c[ch];
    }
  }
  return t;
}

Image make_noise(uint64_t seed) {
  Image t(64, 64, 3);
  std::mt19937_64 g(seed);
  for (uint8_t& v : t.data) {
    v = static_cast<uint8_t>(40 + (g() >> 40) % 176);
  }
  return t;
}

}  // namespace

const char* occlusion_kind_name(OcclusionKind kind) {
  switch (kind) {
    case OcclusionKind::Low2D: return "low";
    case OcclusionKind::Medium2D: return "medium";
    case OcclusionKind::High2D: return "high";
    case OcclusionKind::Round2D: return "round";
    case OcclusionKind::Mask3D: return "mask3d";
    case OcclusionKind::Glasses: return "glasses";
  }
  return "?";
}

AssetPack AssetPack::builtin() {
  AssetPack p;
  auto add_tex = [&](const std::string& id, Image img) {
    p.texture_ids.push_back(id);
    p.textures.emplace(id, std::move(img));
  };
  add_tex("t_stripes_1", make_stripes(4, {200, 44, 44}, {238, 238, 238}));
  add_tex("t_stripes_2", make_stripes(6, {40, 70, 180}, {230, 220, 120}));
  add_tex("t_stripes_3", make_stripes(8, {30, 140, 70}, {20, 20, 20}));
  add_tex("t_checker_1", make_checker(4, {210, 210, 215}, {60, 60, 70}));
  add_tex("t_checker_2", make_checker(8, {190, 120, 60}, {245, 240, 230}));
  add_tex("t_checker_3", make_checker(16, {120, 40, 120}, {220, 200, 90}));
  add_tex("t_noise_1", make_noise(0xA55E7501ull));
  add_tex("t_noise_2", make_noise(0xA55E7502ull));
  add_tex("t_noise_3", make_noise(0xA55E7503ull));

  const double scales[3] = {1.4, 1.8, 2.2};
  const char* scale_tags[3] = {"140", "180", "220"};
  for (int shape = 0; shape < 2; ++shape) {
    for (int i = 0; i < 3; ++i) {
      for (int fin = 0; fin < 2; ++fin) {
        GlassesStyle s;
        s.elliptical = shape == 1;
        s.lens_scale = scales[i];
        if (fin == 0) {
          s.alpha = 1.0;
          s.color = {20, 20, 25};
        } else {
          s.alpha = 0.5;
          s.color = {40, 30, 20};
        }
        s.id = std::string(shape == 0 ? "rect" : "ell") + scale_tags[i] +
               (fin == 0 ? "_opaque" : "_translucent");
        p.styles.push_back(std::move(s));
      }
    }
  }
  return p;
}

AssetPack AssetPack::load(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open asset manifest: " + manifest_path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw FormatError("asset manifest is not a JSON object: " + manifest_path);
  }
  const fs::path base = fs::path(manifest_path).parent_path();
  AssetPack p;
  for (const auto& t : j.value("textures", nlohmann::json::array())) {
    if (!t.contains("id") || !t.contains("path")) {
      throw FormatError("asset texture entries need id and path");
    }
    const std::string id = t["id"].get<std::string>();
    Image img = load_image((base / t["path"].get<std::string>()).string());
    if (img.channels != 3) {
      throw FormatError("asset texture must be RGB: " + id);
    }
    p.texture_ids.push_back(id);
    p.textures.emplace(id, std::move(img));
  }
  for (const auto& g : j.value("glasses", nlohmann::json::array())) {
    GlassesStyle s;
    if (!g.contains("id")) throw FormatError("glasses style entries need id");
    s.id = g["id"].get<std::string>();
    const std::string shape = g.value("shape", "rect");
    if (shape != "rect" && shape != "ellipse") {
      throw FormatError("glasses shape must be rect or ellipse: " + s.id);
    }
    s.elliptical = shape == "ellipse";
    s.lens_scale = g.value("lens_scale", 1.4);
    s.alpha = g.value("alpha", 1.0);
    if (s.lens_scale <= 0.0 || s.alpha < 0.0 || s.alpha > 1.0) {
      throw FormatError("glasses style out of range: " + s.id);
    }
    if (g.contains("color")) {
      const auto& c = g["color"];
      if (!c.is_array() || c.size() != 3) {
        throw FormatError("glasses color must be [r,g,b]: " + s.id);
      }
      for (int i = 0; i < 3; ++i) {
        s.color[i] = static_cast<uint8_t>(
            std::clamp(c[i].get<int>(), 0, 255));
      }
    }
    p.styles.push_back(std::move(s));
  }
  if (p.texture_ids.empty()) throw FormatError("asset manifest has no textures");
  if (p.styles.empty()) throw FormatError("asset manifest has no glasses styles");
  return p;
}

AssetPack AssetPack::from_env() {
  const char* env = std::getenv("OCCLUBENCH_ASSETS");
  if (env && *env) return load(env);
  return builtin();
}

const Image& AssetPack::texture(const std::string& id) const {
  auto it = textures.find(id);
  if (it == textures.end()) throw InvalidInput("unknown texture id: " + id);
  return it->second;
}

const GlassesStyle& AssetPack::style(const std::string& id) const {
  for (const GlassesStyle& s : styles) {
    if (s.id == id) return s;
  }
  throw InvalidInput("unknown glasses style id: " + id);
}

const std::string& AssetPack::default_texture_id() const {
  if (texture_ids.empty()) throw InvalidInput("asset pack has no textures");
  return texture_ids.front();
}

const std::string& AssetPack::default_style_id() const {
  if (styles.empty()) throw InvalidInput("asset pack has no glasses styles");
  return styles.front().id;
}

OcclusionSpec parse_occlusion_token(const std::string& token,
                                    const AssetPack& assets) {
  OcclusionSpec spec;
  std::string head = token, arg;
  const auto colon = token.find(':');
  if (colon != std::string::npos) {
    head = token.substr(0, colon);
    arg = token.substr(colon + 1);
  }
  if (head == "low") spec.kind = OcclusionKind::Low2D;
  else if (head == "medium") spec.kind = OcclusionKind::Medium2D;
  else if (head == "high") spec.kind = OcclusionKind::High2D;
  else if (head == "round") spec.kind = OcclusionKind::Round2D;
  else if (head == "mask3d") spec.kind = OcclusionKind::Mask3D;
  else if (head == "glasses") spec.kind = OcclusionKind::Glasses;
  else throw InvalidInput("unknown occlusion token: " + token);

  const bool takes_arg =
      spec.kind == OcclusionKind::Mask3D || spec.kind == OcclusionKind::Glasses;
  if (!takes_arg && !arg.empty()) {
    throw InvalidInput("occlusion '" + head + "' takes no asset argument");
  }
  if (spec.kind == OcclusionKind::Mask3D) {
    spec.asset_id = arg.empty() ? assets.default_texture_id() : arg;
    assets.texture(spec.asset_id);  // validate
  } else if (spec.kind == OcclusionKind::Glasses) {
    spec.asset_id = arg.empty() ? assets.default_style_id() : arg;
    assets.style(spec.asset_id);  // validate
  }
  return spec;
}

std::string occlusion_token(const OcclusionSpec& spec) {
  std::string s = occlusion_kind_name(spec.kind);
  if (!spec.asset_id.empty()) s += ":" + spec.asset_id;
  return s;
}

Polygon mask_polygon(const LandmarkSet& lms, OcclusionKind kind) {
  const Box bb = lms.bounds();
  double y_top = 0.0;
  switch (kind) {
    case OcclusionKind::Low2D:
      y_top = lms.points[33].y + 0.04 * bb.height();
      break;
    case OcclusionKind::Medium2D:
      y_top = lms.points[30].y;
      break;
    case OcclusionKind::High2D:
    case OcclusionKind::Mask3D:
      y_top = lms.points[28].y;
      break;
    default:
      throw InvalidInput("mask_polygon: not a cut-height mask kind");
  }
  Polygon poly;
  for (int i = 2; i <= 14; ++i) poly.pts.push_back(lms.points[i]);
  poly.pts.push_back({lms.points[14].x, y_top});
  poly.pts.push_back({lms.points[2].x, y_top});
  return poly;
}

Polygon round_mask_polygon(const LandmarkSet& lms) {
  double cx = 0.0, cy = 0.0;
  for (int i = 48; i < 68; ++i) {
    cx += lms.points[i].x;
    cy += lms.points[i].y;
  }
  cx /= 20.0;
  cy /= 20.0;
  const double a = 0.5 * dist(lms.points[4], lms.points[12]);
  const double b = 1.1 * dist(lms.points[33], lms.points[8]) / 2.0;
  return ellipse_polygon(cx, cy, a, b, 64);
}

std::vector<Polygon> glasses_polygons(const LandmarkSet& lms,
                                      const GlassesStyle& style) {
  std::vector<Polygon> parts;
  double lens_cx[2], lens_cy[2], lens_rx[2], lens_ry[2];
  for (int side = 0; side < 2; ++side) {
    const int base = side == 0 ? 36 : 42;
    double x0 = lms.points[base].x, x1 = x0;
    double y0 = lms.points[base].y, y1 = y0;
    for (int i = 1; i < 6; ++i) {
      x0 = std::min(x0, lms.points[base + i].x);
      x1 = std::max(x1, lms.points[base + i].x);
      y0 = std::min(y0, lms.points[base + i].y);
      y1 = std::max(y1, lms.points[base + i].y);
    }
    lens_cx[side] = (x0 + x1) / 2.0;
    lens_cy[side] = (y0 + y1) / 2.0;
    lens_rx[side] = style.lens_scale * (x1 - x0) / 2.0;
    lens_ry[side] = style.lens_scale * (y1 - y0) / 2.0;
    if (style.elliptical) {
      parts.push_back(ellipse_polygon(lens_cx[side], lens_cy[side],
                                      lens_rx[side], lens_ry[side], 24));
    } else {
      Polygon r;
      r.pts = {{lens_cx[side] - lens_rx[side], lens_cy[side] - lens_ry[side]},
               {lens_cx[side] + lens_rx[side], lens_cy[side] - lens_ry[side]},
               {lens_cx[side] + lens_rx[side], lens_cy[side] + lens_ry[side]},
               {lens_cx[side] - lens_rx[side], lens_cy[side] + lens_ry[side]}};
      parts.push_back(std::move(r));
    }
  }
  const Box bb = lms.bounds();
  const double t = std::max(1.0, 0.012 * bb.height());
  // bridge between the inner lens edges
  {
    const double xl = lens_cx[0] + lens_rx[0];
    const double xr = lens_cx[1] - lens_rx[1];
    const double cy = (lens_cy[0] + lens_cy[1]) / 2.0;
    Polygon q;
    q.pts = {{xl, cy - t}, {xr, cy - t}, {xr, cy + t}, {xl, cy + t}};
    parts.push_back(std::move(q));
  }
  // temples out to the jaw corners
  for (int side = 0; side < 2; ++side) {
    const double ox =
        side == 0 ? lens_cx[0] - lens_rx[0] : lens_cx[1] + lens_rx[1];
    const double oy = lens_cy[side];
    const Vec2 jaw = lms.points[side == 0 ? 0 : 16];
    Polygon q;
    q.pts = {{ox, oy - t}, {jaw.x, jaw.y - t}, {jaw.x, jaw.y + t},
             {ox, oy + t}};
    parts.push_back(std::move(q));
  }
  return parts;
}

std::vector<Polygon> occlusion_polygons(const LandmarkSet& lms,
                                        const OcclusionSpec& spec,
                                        const AssetPack& assets) {
  switch (spec.kind) {
    case OcclusionKind::Low2D:
    case OcclusionKind::Medium2D:
    case OcclusionKind::High2D:
    case OcclusionKind::Mask3D:
      return {mask_polygon(lms, spec.kind)};
    case OcclusionKind::Round2D:
      return {round_mask_polygon(lms)};
    case OcclusionKind::Glasses: {
      const std::string& id =
          spec.asset_id.empty() ? assets.default_style_id() : spec.asset_id;
      return glasses_polygons(lms, assets.style(id));
    }
  }
  throw InvalidInput("occlusion_polygons: bad kind");
}

Image apply_occlusion(const Image& frame, const LandmarkSet& lms,
                      const OcclusionSpec& spec, const AssetPack& assets) {
  if (!lms.all_inside(frame.width, frame.height)) {
    throw InvalidInput("apply_occlusion: landmarks outside the frame");
  }
  Image out = frame;
  switch (spec.kind) {
    case OcclusionKind::Low2D:
    case OcclusionKind::Medium2D:
    case OcclusionKind::High2D:
      fill_polygon_inplace(out, mask_polygon(lms, spec.kind), kFlatMaskColor,
                           1.0);
      break;
    case OcclusionKind::Round2D:
      fill_polygon_inplace(out, round_mask_polygon(lms), kFlatMaskColor, 1.0);
      break;
    case OcclusionKind::Mask3D: {
      const std::string& id =
          spec.asset_id.empty() ? assets.default_texture_id() : spec.asset_id;
      blit_textured_inplace(out, mask_polygon(lms, OcclusionKind::Mask3D),
                            assets.texture(id), true);
      break;
    }
    case OcclusionKind::Glasses: {
      const std::string& id =
          spec.asset_id.empty() ? assets.default_style_id() : spec.asset_id;
      const GlassesStyle& style = assets.style(id);
      for (const Polygon& part : glasses_polygons(lms, style)) {
        fill_polygon_inplace(out, part, style.color, style.alpha);
      }
      break;
    }
  }
  return out;
}

double coverage_fraction(const std::vector<Polygon>& parts,
                         const LandmarkSet& lms, int img_w, int img_h) {
  const FaceRegion face = face_hull(lms);
  const Polygon& hull = face.hull;
  const Box bb = face.bbox;
  const int x0 = std::max(0, static_cast<int>(std::floor(bb.min_x)));
  const int x1 = std::min(img_w - 1, static_cast<int>(std::ceil(bb.max_x)));
  const int y0 = std::max(0, static_cast<int>(std::floor(bb.min_y)));
  const int y1 = std::min(img_h - 1, static_cast<int>(std::ceil(bb.max_y)));
  long inside_hull = 0, covered = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double cx = x + 0.5, cy = y + 0.5;
      if (!point_in_polygon(hull, cx, cy)) continue;
      ++inside_hull;
      for (const Polygon& p : parts) {
        if (point_in_polygon(p, cx, cy)) {
          ++covered;
          break;
        }
      }
    }
  }
  if (inside_hull == 0) {
    throw InvalidInput("coverage: face hull contains no pixel centers");
  }
  return static_cast<double>(covered) / static_cast<double>(inside_hull);
}

}  // namespace occlu
