#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "occlu/error.hpp"
#include "occlu/manifest.hpp"
#include "occlu/metrics.hpp"
#include "occlu/occlusion.hpp"
#include "occlu/pipeline.hpp"
#include "occlu/synthdata.hpp"

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kAllOcclusions = {"low",   "medium", "high",
                                                 "round", "mask3d", "glasses"};
const std::vector<std::string> kAllExtractors = {"lbp", "iqm", "motion"};

void add_occlusion_opt(CLI::App* cmd, std::vector<std::string>& tokens) {
  cmd->add_option("--occlusion", tokens,
                  "occlusion kinds: low|medium|high|round|mask3d[:texture]|"
                  "glasses[:style] (default: all six)");
}

void add_extractor_opt(CLI::App* cmd, std::vector<std::string>& extractors) {
  cmd->add_option("--extractor", extractors,
                  "feature pipelines: lbp|iqm|motion (default: all three)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "occlubench: how partial face occlusions degrade classical "
      "presentation-attack detectors"};
  app.require_subcommand(1);

  // ---- synth -------------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "generate a small synthetic face/attack corpus with landmarks");
  occlu::SynthConfig synth_cfg;
  synth_cfg.n_subjects = 12;
  synth_cfg.frames_per_video = 6;
  double train_ratio = 0.5, dev_ratio = 0.2;
  synth->add_option("--out", synth_cfg.out_dir, "corpus output directory")
      ->required();
  synth->add_option("--subjects", synth_cfg.n_subjects, "number of subjects");
  synth->add_option("--frames", synth_cfg.frames_per_video,
                    "frames per video");
  synth->add_option("--seed", synth_cfg.seed, "corpus seed");
  synth->add_option("--width", synth_cfg.width, "frame width");
  synth->add_option("--height", synth_cfg.height, "frame height");
  synth->add_option("--train-ratio", train_ratio,
                    "fraction of subjects used for training");
  synth->add_option("--dev-ratio", dev_ratio,
                    "fraction of subjects used for threshold tuning");

  // ---- occlude -----------------------------------------------------------
  auto* occlude = app.add_subcommand(
      "occlude", "render occluded copies of the test-partition videos");
  std::string occ_manifest, occ_out;
  std::vector<std::string> occ_tokens;
  int occ_jobs = 1;
  occlude->add_option("--manifest", occ_manifest, "corpus manifest")
      ->required();
  occlude->add_option("--out", occ_out, "occluded output directory")
      ->required();
  add_occlusion_opt(occlude, occ_tokens);
  occlude->add_option("--jobs", occ_jobs, "worker threads");

  // ---- extract -----------------------------------------------------------
  auto* extract = app.add_subcommand(
      "extract", "compute feature tables for the corpus (and occluded sets)");
  std::string ext_manifest, ext_out, ext_occluded;
  std::vector<std::string> ext_tokens, ext_extractors;
  int ext_jobs = 1;
  extract->add_option("--manifest", ext_manifest, "corpus manifest")
      ->required();
  extract->add_option("--out", ext_out, "features output directory")
      ->required();
  extract->add_option("--occluded", ext_occluded,
                      "occluded frames directory (from the occlude stage)");
  add_occlusion_opt(extract, ext_tokens);
  add_extractor_opt(extract, ext_extractors);
  extract->add_option("--jobs", ext_jobs, "worker threads");

  // ---- train -------------------------------------------------------------
  auto* train = app.add_subcommand(
      "train", "fit one classifier per extractor on the train partition");
  std::string tr_manifest, tr_features, tr_out;
  std::vector<std::string> tr_extractors;
  occlu::TrainSpec tr_spec;
  double tr_c = 1.0, tr_gamma = -1.0;
  train->add_option("--manifest", tr_manifest, "corpus manifest")->required();
  train->add_option("--features", tr_features, "features directory")
      ->required();
  train->add_option("--out", tr_out, "models output directory")->required();
  add_extractor_opt(train, tr_extractors);
  train->add_option("--kernel", tr_spec.kernel, "rbf | linear");
  train->add_option("--c", tr_c, "fixed C (disables the grid search)");
  train->add_option("--gamma", tr_gamma,
                    "fixed RBF gamma (disables the grid search)");
  train->add_option("--seed", tr_spec.seed, "trainer seed");

  // ---- evaluate ----------------------------------------------------------
  auto* evaluate = app.add_subcommand(
      "evaluate", "score the test partition at the dev-EER threshold");
  std::string ev_manifest, ev_features, ev_models, ev_occluded, ev_out;
  std::vector<std::string> ev_tokens, ev_extractors;
  std::string ev_protocol = "subject-disjoint";
  evaluate->add_option("--manifest", ev_manifest, "corpus manifest")
      ->required();
  evaluate->add_option("--features", ev_features, "features directory")
      ->required();
  evaluate->add_option("--models", ev_models, "models directory")->required();
  evaluate->add_option("--occluded", ev_occluded,
                       "occluded frames directory (for fallback counts)");
  evaluate->add_option("--out", ev_out, "output directory for rows.csv and "
                                        "report.md")
      ->required();
  add_occlusion_opt(evaluate, ev_tokens);
  add_extractor_opt(evaluate, ev_extractors);
  evaluate->add_option("--protocol", ev_protocol, "protocol label");

  // ---- report ------------------------------------------------------------
  auto* report = app.add_subcommand(
      "report", "render a markdown grid from an evaluation rows.csv");
  std::string rep_rows, rep_out;
  report->add_option("--rows", rep_rows, "rows.csv from evaluate")
      ->required();
  report->add_option("--out", rep_out, "markdown output path")->required();

  // ---- run ---------------------------------------------------------------
  auto* run = app.add_subcommand(
      "run", "full pass: occlude, extract, train, evaluate, report, audit");
  occlu::RunConfig run_cfg;
  double run_c = 1.0, run_gamma = -1.0;
  run->add_option("--manifest", run_cfg.manifest_path, "corpus manifest")
      ->required();
  run->add_option("--out", run_cfg.out_dir, "results directory")->required();
  add_occlusion_opt(run, run_cfg.occlusions);
  add_extractor_opt(run, run_cfg.extractors);
  run->add_option("--kernel", run_cfg.train.kernel, "rbf | linear");
  run->add_option("--c", run_c, "fixed C (disables the grid search)");
  run->add_option("--gamma", run_gamma,
                  "fixed RBF gamma (disables the grid search)");
  run->add_option("--seed", run_cfg.train.seed, "trainer seed");
  run->add_option("--jobs", run_cfg.jobs, "worker threads");
  run->add_option("--protocol", run_cfg.protocol, "protocol label");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      std::vector<occlu::ManifestEntry> entries =
          occlu::generate_corpus(synth_cfg);
      occlu::SplitRatios ratios;
      ratios.train = train_ratio;
      ratios.dev = dev_ratio;
      ratios.test = 1.0 - train_ratio - dev_ratio;
      occlu::split_protocol(entries, ratios, synth_cfg.seed);
      occlu::write_manifest(
          (fs::path(synth_cfg.out_dir) / "manifest.jsonl").string(), entries);
      std::printf("wrote %zu videos under %s\n", entries.size(),
                  synth_cfg.out_dir.c_str());
    } else if (occlude->parsed()) {
      if (occ_tokens.empty()) occ_tokens = kAllOcclusions;
      occlu::occlude_corpus(occ_manifest, occ_out, occ_tokens,
                            occlu::AssetPack::from_env(), occ_jobs);
      std::printf("occluded test videos written under %s\n", occ_out.c_str());
    } else if (extract->parsed()) {
      if (ext_extractors.empty()) ext_extractors = kAllExtractors;
      if (ext_tokens.empty()) ext_tokens = kAllOcclusions;
      if (ext_occluded.empty()) ext_tokens.clear();
      occlu::extract_features(ext_manifest, ext_occluded, ext_out,
                              ext_extractors, ext_tokens, ext_jobs);
      std::printf("feature tables written under %s\n", ext_out.c_str());
    } else if (train->parsed()) {
      if (tr_extractors.empty()) tr_extractors = kAllExtractors;
      if (train->count("--c") > 0 || train->count("--gamma") > 0) {
        tr_spec.grid = false;
        tr_spec.c = tr_c;
        tr_spec.gamma = tr_gamma;
      }
      occlu::train_models(tr_manifest, tr_features, tr_out, tr_extractors,
                          tr_spec);
      std::printf("models written under %s\n", tr_out.c_str());
    } else if (evaluate->parsed()) {
      if (ev_extractors.empty()) ev_extractors = kAllExtractors;
      if (ev_tokens.empty()) ev_tokens = kAllOcclusions;
      const std::vector<occlu::ReportRow> rows = occlu::evaluate_models(
          ev_manifest, ev_features, ev_models, ev_occluded, ev_extractors,
          ev_tokens, ev_protocol);
      fs::create_directories(ev_out);
      occlu::write_report_csv((fs::path(ev_out) / "rows.csv").string(), rows);
      std::ofstream md(fs::path(ev_out) / "report.md", std::ios::binary);
      if (!md) throw occlu::IoError("cannot write report.md");
      md << occlu::report_markdown(rows);
      std::printf("evaluation written under %s\n", ev_out.c_str());
    } else if (report->parsed()) {
      const std::vector<occlu::ReportRow> rows =
          occlu::read_report_csv(rep_rows);
      std::ofstream md(rep_out, std::ios::binary);
      if (!md) throw occlu::IoError("cannot write " + rep_out);
      md << occlu::report_markdown(rows);
      std::printf("report written to %s\n", rep_out.c_str());
    } else if (run->parsed()) {
      if (run->count("--c") > 0 || run->count("--gamma") > 0) {
        run_cfg.train.grid = false;
        run_cfg.train.c = run_c;
        run_cfg.train.gamma = run_gamma;
      }
      occlu::run_protocol(run_cfg);
      std::printf("results written under %s\n", run_cfg.out_dir.c_str());
    }
  } catch (const occlu::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 0;
}
