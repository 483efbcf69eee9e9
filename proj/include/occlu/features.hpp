#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "occlu/image.hpp"

namespace occlu {

// --- local binary patterns ------------------------------------------------
// 8-neighbor codes read clockwise from the top-left neighbor; bit k is set
// when that neighbor is >= the center. Codes with at most two circular
// 0/1 transitions keep their own histogram bin (in ascending code order);
// everything else shares the final bin.

constexpr int kLbpBins = 59;

uint8_t lbp_code(const Image& gray, int x, int y);
int circular_transitions(uint8_t code);
int uniform_bin(uint8_t code);  // 0..57 for the 58 uniform codes, else 58
Image lbp_map(const Image& gray);  // (w-2) x (h-2), raw codes
std::vector<double> lbp_histogram(const Image& gray);  // normalized, 59 bins

// --- image quality measures -------------------------------------------------
// 12 full-reference measures of a grayscale image against a reference; the
// feature vector uses the image's own 0.5-sigma Gaussian blur as reference.

constexpr int kIqmCount = 12;
extern const char* const kIqmNames[kIqmCount];

std::vector<double> iqm_measures(const Image& gray, const Image& ref);
std::vector<double> iqm_vector(const Image& gray);

// --- inter-frame motion -----------------------------------------------------
// Mean absolute frame difference inside vs outside a fixed face box, and the
// face share of the total, per consecutive frame pair.

struct MotionSignal {
  std::vector<double> face;   // mean |diff| inside the box
  std::vector<double> bg;     // mean |diff| outside the box
  std::vector<double> ratio;  // face / (face + bg + 1e-6)
};

MotionSignal motion_signal(const std::vector<Image>& gray_frames,
                           const Box& face_box);
std::vector<double> motion_features(const MotionSignal& sig);  // 5 values
extern const char* const kMotionNames[5];

// --- feature tables ----------------------------------------------------------

struct FeatureRow {
  std::string sample_id;
  int frame = 0;  // -1 for whole-video features
  std::string label;  // "bonafide" | "attack"
  std::vector<double> values;
};

struct FeatureTable {
  std::vector<std::string> columns;  // value column names
  std::vector<FeatureRow> rows;
};

// Writes rows sorted by (sample_id, frame); floats use shortest %.9g form.
void write_feature_csv(const std::string& path,
                       const std::vector<std::string>& columns,
                       std::vector<FeatureRow> rows);
FeatureTable read_feature_csv(const std::string& path);

}  // namespace occlu
