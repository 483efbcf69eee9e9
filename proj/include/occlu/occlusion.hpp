#pragma once

#include <map>
#include <string>
#include <vector>

#include "occlu/image.hpp"
#include "occlu/landmarks.hpp"

namespace occlu {

// Partial-occlusion synthesis: surgical-style masks cut at three heights, a
// round mouth cover, a textured mask with fake depth shading, and glasses.

enum class OcclusionKind { Low2D, Medium2D, High2D, Round2D, Mask3D, Glasses };

const char* occlusion_kind_name(OcclusionKind kind);  // "low", "mask3d", ...

struct GlassesStyle {
  std::string id;
  bool elliptical = false;  // false: rectangular lenses
  double lens_scale = 1.4;  // lens half-extent relative to the eye box
  double alpha = 1.0;
  Rgb color{20, 20, 25};
};

struct AssetPack {
  std::vector<std::string> texture_ids;  // stable iteration order
  std::map<std::string, Image> textures;
  std::vector<GlassesStyle> styles;

  static AssetPack builtin();
  // JSON manifest: {"textures":[{"id","path"}...], "glasses":[{...}...]}
  // Texture paths resolve relative to the manifest file.
  static AssetPack load(const std::string& manifest_path);
  // builtin() unless OCCLUBENCH_ASSETS points at a manifest.
  static AssetPack from_env();

  const Image& texture(const std::string& id) const;
  const GlassesStyle& style(const std::string& id) const;
  const std::string& default_texture_id() const;
  const std::string& default_style_id() const;
};

struct OcclusionSpec {
  OcclusionKind kind = OcclusionKind::Low2D;
  std::string asset_id;  // Mask3D texture / Glasses style; empty = default
};

// Tokens: low | medium | high | round | mask3d[:texture] | glasses[:style]
OcclusionSpec parse_occlusion_token(const std::string& token,
                                    const AssetPack& assets);
std::string occlusion_token(const OcclusionSpec& spec);

// Mask outline for Low/Medium/High cut heights (Mask3D shares the High one).
Polygon mask_polygon(const LandmarkSet& lms, OcclusionKind kind);
Polygon round_mask_polygon(const LandmarkSet& lms);
std::vector<Polygon> glasses_polygons(const LandmarkSet& lms,
                                      const GlassesStyle& style);
// All parts of the occlusion for `spec`, for coverage measurement.
std::vector<Polygon> occlusion_polygons(const LandmarkSet& lms,
                                        const OcclusionSpec& spec,
                                        const AssetPack& assets);

Image apply_occlusion(const Image& frame, const LandmarkSet& lms,
                      const OcclusionSpec& spec, const AssetPack& assets);

// Fraction of face-hull pixel centers covered by any of `parts`.
double coverage_fraction(const std::vector<Polygon>& parts,
                         const LandmarkSet& lms, int img_w, int img_h);

}  // namespace occlu
