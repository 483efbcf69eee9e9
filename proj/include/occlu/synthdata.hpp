#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "occlu/image.hpp"
#include "occlu/landmarks.hpp"
#include "occlu/manifest.hpp"

namespace occlu {

struct SynthConfig {
  uint64_t seed = 0;
  int n_subjects = 2;
  int frames_per_video = 2;
  int width = 240;
  int height = 320;
  std::vector<std::string> attack_kinds = {"print", "replay"};
  std::string out_dir;
};

struct SplitRatios {
  double train = 0.5;
  double dev = 0.2;
  double test = 0.3;
};

// Renders one procedural face video per subject plus one derived attack
// video per attack kind, writes frames (frame_%04d.ppm), per-video landmark
// files and <out_dir>/manifest.jsonl, and returns the entries (partition
// still empty). Identical configs produce byte-identical trees.
std::vector<ManifestEntry> generate_corpus(const SynthConfig& cfg);

// Assigns partitions subject-disjointly: floor(train*n) / floor(dev*n) /
// rest, after a seeded shuffle of the subject list. Every partition must
// receive at least one subject.
void split_protocol(std::vector<ManifestEntry>& entries, SplitRatios ratios,
                    uint64_t seed);

// The canonical face centered in a w x h frame, without any per-subject
// variation. Useful as a fixed geometry reference.
LandmarkSet reference_landmarks(int img_w, int img_h);

// Landmark sets for n generated subjects (frame 0, no files written).
std::vector<LandmarkSet> sample_landmark_corpus(uint64_t seed, int n,
                                                int img_w, int img_h);

// The two recapture transforms applied to bonafide frames.
Image print_recapture(const Image& frame);
Image replay_recapture(const Image& frame, int frame_index);

}  // namespace occlu
