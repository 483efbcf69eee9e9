#include "occlu/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "occlu/error.hpp"
#include "occlu/features.hpp"
#include "occlu/landmarks.hpp"
#include "occlu/sha256.hpp"

namespace fs = std::filesystem;

namespace occlu {

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (jobs <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min(jobs, n);
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

OutputGuard::OutputGuard(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory: " + dir);
  }
  marker_ = (fs::path(dir) / ".incomplete").string();
  std::ofstream out(marker_, std::ios::binary);
  out << "stage in progress or interrupted\n";
  if (!out) throw IoError("cannot write marker: " + marker_);
}

void OutputGuard::commit() {
  std::error_code ec;
  fs::remove(marker_, ec);
}

namespace {

const std::set<std::string> kKnownExtractors = {"lbp", "iqm", "motion"};

void require_extractors(const std::vector<std::string>& extractors) {
  if (extractors.empty()) throw InvalidInput("no extractors selected");
  for (const std::string& e : extractors) {
    if (!kKnownExtractors.count(e)) {
      throw InvalidInput("unknown extractor: " + e +
                         " (expected lbp, iqm, or motion)");
    }
  }
}

std::vector<std::string> extractor_columns(const std::string& ex) {
  std::vector<std::string> cols;
  if (ex == "lbp") {
    for (int i = 0; i < kLbpBins; ++i) cols.push_back("bin_" + std::to_string(i));
  } else if (ex == "iqm") {
    cols.assign(kIqmNames, kIqmNames + kIqmCount);
  } else {
    cols.assign(kMotionNames, kMotionNames + 5);
  }
  return cols;
}

// One video's inputs, already resolved to absolute paths.
struct VideoSource {
  const ManifestEntry* entry = nullptr;
  std::string frames_dir;
  std::string landmarks_path;
};

std::vector<VideoSource> base_sources(const std::string& manifest_path,
                                      const std::vector<ManifestEntry>& entries) {
  std::vector<VideoSource> out;
  for (const ManifestEntry& e : entries) {
    VideoSource s;
    s.entry = &e;
    s.frames_dir = resolve_path(manifest_path, e.frames_dir);
    s.landmarks_path = resolve_path(manifest_path, e.landmarks_path);
    out.push_back(std::move(s));
  }
  return out;
}

const LandmarkSet& track_at(const LandmarkTrack& track, int frame,
                            const std::string& video_id) {
  const auto it = track.find(frame);
  if (it == track.end()) {
    throw FormatError("video " + video_id + ": no landmarks for frame " +
                      std::to_string(frame));
  }
  return it->second;
}

// Frame-level features (lbp / iqm) for a list of videos.
std::vector<FeatureRow> frame_rows(const std::string& extractor,
                                   const std::vector<VideoSource>& videos,
                                   int jobs) {
  struct Task {
    const VideoSource* video;
    const LandmarkTrack* track;
    std::string frame_path;
    int frame = 0;
  };
  std::vector<LandmarkTrack> tracks(videos.size());
  std::vector<Task> tasks;
  for (size_t v = 0; v < videos.size(); ++v) {
    tracks[v] = parse_landmarks(videos[v].landmarks_path);
    const std::vector<std::string> frames = list_frames(videos[v].frames_dir);
    if (frames.empty()) {
      throw InvalidInput("video " + videos[v].entry->id + ": no frames in " +
                         videos[v].frames_dir);
    }
    for (const std::string& f : frames) {
      Task t;
      t.video = &videos[v];
      t.track = &tracks[v];
      t.frame_path = f;
      t.frame = frame_index_from_name(f);
      tasks.push_back(std::move(t));
    }
  }
  std::vector<FeatureRow> rows(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) {
    const Task& t = tasks[i];
    const Image img = load_image(t.frame_path);
    const LandmarkSet& lms = track_at(*t.track, t.frame, t.video->entry->id);
    const Image crop = face_crop(img, lms, kFaceCropSize);
    FeatureRow row;
    row.sample_id = t.video->entry->id;
    row.frame = t.frame;
    row.label = t.video->entry->label;
    row.values = extractor == "lbp" ? lbp_histogram(crop) : iqm_vector(crop);
    rows[i] = std::move(row);
  });
  return rows;
}

// Whole-video motion features.
std::vector<FeatureRow> motion_rows(const std::vector<VideoSource>& videos,
                                    int jobs) {
  std::vector<FeatureRow> rows(videos.size());
  parallel_for(static_cast<int>(videos.size()), jobs, [&](int i) {
    const VideoSource& v = videos[i];
    const LandmarkTrack track = parse_landmarks(v.landmarks_path);
    if (track.empty()) {
      throw FormatError("video " + v.entry->id + ": empty landmark track");
    }
    std::vector<Image> gray;
    for (const std::string& f : list_frames(v.frames_dir)) {
      gray.push_back(to_grayscale(load_image(f)));
    }
    if (gray.size() < 2) {
      throw InvalidInput("video " + v.entry->id +
                         ": motion features need at least two frames");
    }
    const Box face_box = track.begin()->second.bounds();
    FeatureRow row;
    row.sample_id = v.entry->id;
    row.frame = -1;
    row.label = v.entry->label;
    row.values = motion_features(motion_signal(gray, face_box));
    rows[i] = std::move(row);
  });
  return rows;
}

std::vector<FeatureRow> extract_rows(const std::string& extractor,
                                     const std::vector<VideoSource>& videos,
                                     int jobs) {
  return extractor == "motion" ? motion_rows(videos, jobs)
                               : frame_rows(extractor, videos, jobs);
}

std::string features_csv_path(const std::string& features_dir,
                              const std::string& extractor,
                              const std::string& suffix) {
  return (fs::path(features_dir) / (extractor + "_" + suffix + ".csv"))
      .string();
}

// manifest id -> entry, with partitions required
std::map<std::string, const ManifestEntry*> index_entries(
    const std::vector<ManifestEntry>& entries, bool need_partitions) {
  std::map<std::string, const ManifestEntry*> by_id;
  for (const ManifestEntry& e : entries) {
    if (!by_id.emplace(e.id, &e).second) {
      throw FormatError("manifest: duplicate sample id: " + e.id);
    }
    if (need_partitions && e.partition.empty()) {
      throw InvalidInput("manifest: sample " + e.id +
                         " has no partition; split the corpus first");
    }
  }
  return by_id;
}

// sample_id -> (label, mean score over the sample's rows), insertion-ordered
// by first appearance; the table rows are already sorted by (id, frame).
std::map<std::string, std::pair<std::string, double>> video_scores(
    const SvmModel& model, const FeatureTable& table,
    const std::map<std::string, const ManifestEntry*>& by_id,
    const std::string& partition) {
  std::map<std::string, std::pair<std::string, double>> out;
  std::map<std::string, std::pair<double, int>> acc;
  for (const FeatureRow& row : table.rows) {
    const auto it = by_id.find(row.sample_id);
    if (it == by_id.end()) {
      throw FormatError("feature table references unknown sample: " +
                        row.sample_id);
    }
    if (row.label != it->second->label) {
      throw FormatError("feature table label disagrees with manifest for " +
                        row.sample_id);
    }
    if (it->second->partition != partition) continue;
    auto& a = acc[row.sample_id];
    a.first += svm_score(model, row.values);
    a.second += 1;
  }
  for (const auto& [id, a] : acc) {
    out[id] = {by_id.at(id)->label, a.first / a.second};
  }
  return out;
}

ScoreSet to_score_set(
    const std::map<std::string, std::pair<std::string, double>>& by_video) {
  ScoreSet s;
  for (const auto& [id, lv] : by_video) {
    (lv.first == "bonafide" ? s.bonafide : s.attack).push_back(lv.second);
  }
  return s;
}

struct GridPoint {
  double c = 0.0, gamma = 0.0;
  double dev_eer = 0.0;
  bool converged = false;
};

}  // namespace

void occlude_corpus(const std::string& manifest_path,
                    const std::string& occluded_dir,
                    const std::vector<std::string>& occlusion_tokens,
                    const AssetPack& assets, int jobs) {
  if (occlusion_tokens.empty()) {
    throw InvalidInput("occlude: no occlusion kinds requested");
  }
  const std::vector<ManifestEntry> entries = read_manifest(manifest_path);
  std::vector<VideoSource> test;
  for (const VideoSource& s : base_sources(manifest_path, entries)) {
    if (s.entry->partition == "test") test.push_back(s);
  }
  if (test.empty()) throw InvalidInput("occlude: manifest has no test videos");

  for (const std::string& token : occlusion_tokens) {
    const OcclusionSpec spec = parse_occlusion_token(token, assets);
    const fs::path kind_dir =
        fs::path(occluded_dir) / occlusion_kind_name(spec.kind);
    OutputGuard guard(kind_dir.string());
    std::vector<int> fallback_counts(test.size(), 0);
    parallel_for(static_cast<int>(test.size()), jobs, [&](int i) {
      const VideoSource& v = test[i];
      const LandmarkTrack track = parse_landmarks(v.landmarks_path);
      const std::vector<std::string> frames = list_frames(v.frames_dir);
      if (frames.empty()) {
        throw InvalidInput("occlude: no frames in " + v.frames_dir);
      }
      const fs::path video_dir = kind_dir / v.entry->id;
      std::error_code ec;
      fs::create_directories(video_dir, ec);
      if (ec) throw IoError("cannot create " + video_dir.string());
      int fallbacks = 0;
      for (const std::string& fpath : frames) {
        const Image img = load_image(fpath);
        const int idx = frame_index_from_name(fpath);
        const auto it = track.find(idx);
        Image out;
        if (it != track.end()) {
          try {
            out = apply_occlusion(img, it->second, spec, assets);
          } catch (const InvalidInput&) {
            out = img;
            ++fallbacks;
          }
        } else {
          out = img;
          ++fallbacks;
        }
        save_image(out, (video_dir / fs::path(fpath).filename()).string());
      }
      write_landmarks((video_dir / "landmarks.jsonl").string(), track);
      fallback_counts[i] = fallbacks;
    });
    std::map<std::string, int> by_id;
    for (size_t i = 0; i < test.size(); ++i) {
      by_id[test[i].entry->id] = fallback_counts[i];
    }
    nlohmann::json j(by_id);
    std::ofstream out(kind_dir / "fallbacks.json", std::ios::binary);
    if (!out) throw IoError("cannot write fallbacks.json");
    out << j.dump(2) << "\n";
    guard.commit();
  }
}

void extract_features(const std::string& manifest_path,
                      const std::string& occluded_dir,
                      const std::string& features_dir,
                      const std::vector<std::string>& extractors,
                      const std::vector<std::string>& occlusion_tokens,
                      int jobs) {
  require_extractors(extractors);
  const std::vector<ManifestEntry> entries = read_manifest(manifest_path);
  if (entries.empty()) throw InvalidInput("extract: empty manifest");
  const std::vector<VideoSource> all = base_sources(manifest_path, entries);

  std::vector<std::pair<std::string, std::vector<VideoSource>>> occluded_sets;
  if (!occluded_dir.empty()) {
    const AssetPack assets = AssetPack::from_env();
    for (const std::string& token : occlusion_tokens) {
      const OcclusionSpec spec = parse_occlusion_token(token, assets);
      const std::string kind = occlusion_kind_name(spec.kind);
      std::vector<VideoSource> vids;
      for (const VideoSource& s : all) {
        if (s.entry->partition != "test") continue;
        VideoSource o = s;
        const fs::path dir = fs::path(occluded_dir) / kind / s.entry->id;
        o.frames_dir = dir.string();
        o.landmarks_path = (dir / "landmarks.jsonl").string();
        vids.push_back(std::move(o));
      }
      if (vids.empty()) {
        throw InvalidInput("extract: no test videos for occlusion " + kind);
      }
      if (fs::exists(fs::path(occluded_dir) / kind / ".incomplete")) {
        throw InvalidInput("extract: occluded set '" + kind +
                           "' is marked incomplete; re-run the occlude stage");
      }
      occluded_sets.emplace_back(kind, std::move(vids));
    }
  }

  OutputGuard guard(features_dir);
  for (const std::string& ex : extractors) {
    write_feature_csv(features_csv_path(features_dir, ex, "base"),
                      extractor_columns(ex), extract_rows(ex, all, jobs));
    for (const auto& [kind, vids] : occluded_sets) {
      write_feature_csv(features_csv_path(features_dir, ex, kind),
                        extractor_columns(ex), extract_rows(ex, vids, jobs));
    }
  }
  guard.commit();
}

void train_models(const std::string& manifest_path,
                  const std::string& features_dir,
                  const std::string& models_dir,
                  const std::vector<std::string>& extractors,
                  const TrainSpec& spec) {
  require_extractors(extractors);
  if (spec.kernel != "rbf" && spec.kernel != "linear") {
    throw InvalidInput("train: kernel must be rbf or linear");
  }
  const std::vector<ManifestEntry> entries = read_manifest(manifest_path);
  const auto by_id = index_entries(entries, true);

  OutputGuard guard(models_dir);
  for (const std::string& ex : extractors) {
    const FeatureTable table =
        read_feature_csv(features_csv_path(features_dir, ex, "base"));
    LabeledSet train;
    for (const FeatureRow& row : table.rows) {
      const auto it = by_id.find(row.sample_id);
      if (it == by_id.end()) {
        throw FormatError("feature table references unknown sample: " +
                          row.sample_id);
      }
      if (it->second->partition != "train") continue;
      train.x.push_back(row.values);
      train.y.push_back(row.label == "bonafide" ? 1 : -1);
    }
    if (train.x.empty()) {
      throw InvalidInput("train: no training rows for " + ex);
    }

    const NormStats norm = fit_norm(train.x);
    std::vector<std::vector<double>> z;
    z.reserve(train.x.size());
    for (const auto& x : train.x) z.push_back(apply_norm(norm, x));
    const double gamma0 = default_gamma(z);

    std::vector<double> c_candidates, gamma_candidates;
    if (spec.grid) {
      c_candidates = {0.1, 1.0, 10.0, 100.0};
      if (spec.kernel == "rbf") {
        gamma_candidates = {0.25 * gamma0, gamma0, 4.0 * gamma0};
      } else {
        gamma_candidates = {1.0};
      }
    } else {
      c_candidates = {spec.c};
      gamma_candidates = {spec.kernel == "rbf"
                              ? (spec.gamma > 0.0 ? spec.gamma : gamma0)
                              : 1.0};
    }

    SvmModel best_model;
    TrainDiagnostics best_diag;
    GridPoint best_point;
    std::vector<GridPoint> tried;
    bool have_best = false;
    for (const double c : c_candidates) {
      for (const double gamma : gamma_candidates) {
        TrainOptions opts;
        opts.kernel.kind =
            spec.kernel == "rbf" ? KernelKind::Rbf : KernelKind::Linear;
        opts.kernel.gamma = gamma;
        opts.c = c;
        opts.seed = spec.seed;
        TrainDiagnostics diag;
        const SvmModel model = svm_train(train, opts, &diag);
        const ScoreSet dev =
            to_score_set(video_scores(model, table, by_id, "dev"));
        if (dev.bonafide.empty() || dev.attack.empty()) {
          throw InvalidInput(
              "train: dev partition lacks both classes for " + ex);
        }
        GridPoint point;
        point.c = c;
        point.gamma = gamma;
        point.dev_eer = eer_threshold(dev).eer;
        point.converged = diag.converged;
        tried.push_back(point);
        if (!have_best || point.dev_eer < best_point.dev_eer) {
          have_best = true;
          best_point = point;
          best_model = model;
          best_diag = diag;
        }
      }
    }

    save_model((fs::path(models_dir) / (ex + ".json")).string(), best_model);
    nlohmann::ordered_json summary;
    summary["extractor"] = ex;
    summary["kernel"] = spec.kernel;
    summary["c"] = best_point.c;
    if (spec.kernel == "rbf") {
      summary["gamma"] = best_point.gamma;
      summary["default_gamma"] = gamma0;
    }
    summary["dev_eer"] = best_point.dev_eer;
    summary["converged"] = best_diag.converged;
    summary["full_passes"] = best_diag.full_passes;
    summary["steps"] = best_diag.steps;
    summary["n_train_rows"] = train.x.size();
    summary["n_support_vectors"] = best_model.sv_x.size();
    if (spec.grid) {
      nlohmann::ordered_json grid = nlohmann::ordered_json::array();
      for (const GridPoint& g : tried) {
        nlohmann::ordered_json item;
        item["c"] = g.c;
        if (spec.kernel == "rbf") item["gamma"] = g.gamma;
        item["dev_eer"] = g.dev_eer;
        item["converged"] = g.converged;
        grid.push_back(std::move(item));
      }
      summary["grid"] = std::move(grid);
    }
    std::ofstream out(fs::path(models_dir) / (ex + "_training.json"),
                      std::ios::binary);
    if (!out) throw IoError("cannot write training summary for " + ex);
    out << summary.dump(2) << "\n";
  }
  guard.commit();
}

std::vector<ReportRow> evaluate_models(
    const std::string& manifest_path, const std::string& features_dir,
    const std::string& models_dir, const std::string& occluded_dir,
    const std::vector<std::string>& extractors,
    const std::vector<std::string>& occlusion_tokens,
    const std::string& protocol) {
  require_extractors(extractors);
  const std::vector<ManifestEntry> entries = read_manifest(manifest_path);
  const auto by_id = index_entries(entries, true);
  const AssetPack assets = AssetPack::from_env();

  std::vector<ReportRow> rows;
  for (const std::string& ex : extractors) {
    const SvmModel model =
        load_model((fs::path(models_dir) / (ex + ".json")).string());
    const FeatureTable base =
        read_feature_csv(features_csv_path(features_dir, ex, "base"));
    const ScoreSet dev = to_score_set(video_scores(model, base, by_id, "dev"));
    if (dev.bonafide.empty() || dev.attack.empty()) {
      throw InvalidInput("evaluate: dev partition lacks both classes");
    }
    const double tau = eer_threshold(dev).threshold;

    auto make_row = [&](const std::string& occlusion, const ScoreSet& s,
                        int fallbacks) {
      ReportRow r;
      r.protocol = protocol;
      r.occlusion = occlusion;
      r.extractor = ex;
      r.threshold = tau;
      const RatePair fr = far_frr(s, tau);
      r.far = fr.far;
      r.frr = fr.frr;
      r.hter = 0.5 * (fr.far + fr.frr);
      const PadRates pad = apcer_bpcer_acer(s, tau);
      r.apcer = pad.apcer;
      r.bpcer = pad.bpcer;
      r.acer = pad.acer;
      r.n_bonafide = static_cast<int>(s.bonafide.size());
      r.n_attack = static_cast<int>(s.attack.size());
      r.n_unoccluded_fallback = fallbacks;
      return r;
    };

    const ScoreSet test_none =
        to_score_set(video_scores(model, base, by_id, "test"));
    if (test_none.bonafide.empty() || test_none.attack.empty()) {
      throw InvalidInput("evaluate: test partition lacks both classes");
    }
    rows.push_back(make_row("none", test_none, 0));

    for (const std::string& token : occlusion_tokens) {
      const OcclusionSpec spec = parse_occlusion_token(token, assets);
      const std::string kind = occlusion_kind_name(spec.kind);
      const FeatureTable occluded =
          read_feature_csv(features_csv_path(features_dir, ex, kind));
      const ScoreSet s =
          to_score_set(video_scores(model, occluded, by_id, "test"));
      if (s.bonafide.empty() || s.attack.empty()) {
        throw InvalidInput("evaluate: occluded test set lacks both classes");
      }
      int fallbacks = 0;
      const fs::path fb_path =
          fs::path(occluded_dir) / kind / "fallbacks.json";
      if (!occluded_dir.empty() && fs::exists(fb_path)) {
        std::ifstream in(fb_path);
        const nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
          throw FormatError("bad fallbacks.json for " + kind);
        }
        for (const auto& [id, count] : j.items()) {
          (void)id;
          fallbacks += count.get<int>();
        }
      }
      rows.push_back(make_row(kind, s, fallbacks));
    }
  }
  return rows;
}

void run_protocol(const RunConfig& cfg) {
  const std::vector<ManifestEntry> entries = read_manifest(cfg.manifest_path);
  if (entries.empty()) throw InvalidInput("run: empty manifest");
  index_entries(entries, true);  // validates partitions and id uniqueness

  std::vector<std::string> protected_files;
  for (const ManifestEntry& e : entries) {
    if (e.partition == "test") continue;
    protected_files.push_back(resolve_path(cfg.manifest_path, e.landmarks_path));
    for (const std::string& f :
         list_frames(resolve_path(cfg.manifest_path, e.frames_dir))) {
      protected_files.push_back(f);
    }
  }
  std::sort(protected_files.begin(), protected_files.end());
  const std::string digest_before = sha256_files_hex(protected_files);

  const AssetPack assets = AssetPack::from_env();
  OutputGuard run_guard(cfg.out_dir);
  const fs::path out(cfg.out_dir);
  const std::string occluded_dir = (out / "occluded").string();
  const std::string features_dir = (out / "features").string();
  const std::string models_dir = (out / "models").string();

  occlude_corpus(cfg.manifest_path, occluded_dir, cfg.occlusions, assets,
                 cfg.jobs);
  extract_features(cfg.manifest_path, occluded_dir, features_dir,
                   cfg.extractors, cfg.occlusions, cfg.jobs);
  train_models(cfg.manifest_path, features_dir, models_dir, cfg.extractors,
               cfg.train);
  const std::vector<ReportRow> rows =
      evaluate_models(cfg.manifest_path, features_dir, models_dir,
                      occluded_dir, cfg.extractors, cfg.occlusions,
                      cfg.protocol);
  write_report_csv((out / "rows.csv").string(), rows);
  {
    std::ofstream md(out / "report.md", std::ios::binary);
    if (!md) throw IoError("cannot write report.md");
    md << report_markdown(rows);
  }

  const std::string digest_after = sha256_files_hex(protected_files);
  {
    nlohmann::ordered_json audit;
    audit["algorithm"] = "sha-256";
    audit["n_files"] = protected_files.size();
    audit["before"] = digest_before;
    audit["after"] = digest_after;
    audit["match"] = digest_before == digest_after;
    std::ofstream out_audit(out / "audit.json", std::ios::binary);
    if (!out_audit) throw IoError("cannot write audit.json");
    out_audit << audit.dump(2) << "\n";
  }
  if (digest_before != digest_after) {
    throw Error("run: train/dev inputs changed during the run");
  }
  run_guard.commit();
}

}  // namespace occlu
