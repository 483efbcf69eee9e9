#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "occlu/manifest.hpp"
#include "occlu/metrics.hpp"
#include "occlu/occlusion.hpp"
#include "occlu/svm.hpp"

namespace occlu {

// Runs fn(0..n-1) on up to `jobs` threads; the first exception thrown by any
// worker is rethrown on the caller's thread after all workers finish.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

// Marks a directory as in-progress with a `.incomplete` file so interrupted
// stages are recognizable; commit() removes the marker.
class OutputGuard {
 public:
  explicit OutputGuard(const std::string& dir);
  ~OutputGuard() = default;
  void commit();

 private:
  std::string marker_;
};

constexpr int kFaceCropSize = 128;

struct TrainSpec {
  std::string kernel = "rbf";  // "rbf" | "linear"
  bool grid = true;            // search C x gamma by dev video EER
  double c = 1.0;              // used when grid is off
  double gamma = -1.0;         // used when grid is off; <= 0 picks the default
  uint64_t seed = 1;
};

struct RunConfig {
  std::string manifest_path;
  std::string out_dir;
  std::vector<std::string> occlusions = {"low",   "medium", "high",
                                         "round", "mask3d", "glasses"};
  std::vector<std::string> extractors = {"lbp", "iqm", "motion"};
  TrainSpec train;
  std::string protocol = "subject-disjoint";
  int jobs = 1;
};

// Renders occluded copies of every test-partition video, one subdirectory
// per occlusion kind; frames whose landmarks leave the frame fall back to
// the original image and are counted in <kind>/fallbacks.json.
void occlude_corpus(const std::string& manifest_path,
                    const std::string& occluded_dir,
                    const std::vector<std::string>& occlusion_tokens,
                    const AssetPack& assets, int jobs);

// Writes <extractor>_base.csv over the full corpus plus
// <extractor>_<kind>.csv over the occluded test videos. Pass an empty
// occluded_dir (or token list) to produce only the base tables.
void extract_features(const std::string& manifest_path,
                      const std::string& occluded_dir,
                      const std::string& features_dir,
                      const std::vector<std::string>& extractors,
                      const std::vector<std::string>& occlusion_tokens,
                      int jobs);

// Fits one classifier per extractor on the train partition, choosing
// hyper-parameters by dev-set video EER when spec.grid is set. Writes
// <extractor>.json and a <extractor>_training.json summary.
void train_models(const std::string& manifest_path,
                  const std::string& features_dir,
                  const std::string& models_dir,
                  const std::vector<std::string>& extractors,
                  const TrainSpec& spec);

// Scores the test partition at the dev-EER threshold: one row per extractor
// for the unoccluded set ("none") and one per occlusion kind.
std::vector<ReportRow> evaluate_models(
    const std::string& manifest_path, const std::string& features_dir,
    const std::string& models_dir, const std::string& occluded_dir,
    const std::vector<std::string>& extractors,
    const std::vector<std::string>& occlusion_tokens,
    const std::string& protocol);

// Full pass: integrity-hash the train/dev inputs, occlude, extract, train,
// evaluate, write rows.csv / report.md, re-hash and write audit.json.
// Throws if the train/dev inputs changed while the run used them.
void run_protocol(const RunConfig& cfg);

}  // namespace occlu
