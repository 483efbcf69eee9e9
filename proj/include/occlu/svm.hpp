#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace occlu {

enum class KernelKind { Linear, Rbf };

struct Kernel {
  KernelKind kind = KernelKind::Rbf;
  double gamma = 1.0;  // Rbf only
};

double kernel_eval(const Kernel& k, const std::vector<double>& a,
                   const std::vector<double>& b);

// Per-dimension z-scoring fitted on the training set; zero-variance
// dimensions get their deviation floored so they map to zero.
struct NormStats {
  std::vector<double> mean, stdev;
};

NormStats fit_norm(const std::vector<std::vector<double>>& xs);
std::vector<double> apply_norm(const NormStats& norm,
                               const std::vector<double>& x);

struct LabeledSet {
  std::vector<std::vector<double>> x;
  std::vector<int> y;  // +1 / -1
};

struct TrainOptions {
  Kernel kernel;
  double c = 1.0;
  double tol = 1e-3;
  int max_quick_passes = 10;   // consecutive non-bound sweeps between full ones
  int max_full_passes = 500;   // hard cap on full sweeps
  uint64_t seed = 1;           // second-choice fallback start positions
  bool record_trace = false;   // capture the dual objective after every step
};

struct TrainDiagnostics {
  bool converged = false;
  int full_passes = 0;
  long steps = 0;
  std::vector<double> dual_trace;
};

struct SvmModel {
  Kernel kernel;
  NormStats norm;
  std::vector<std::vector<double>> sv_x;  // normalized support vectors
  std::vector<double> sv_alpha;
  std::vector<int> sv_y;
  double b = 0.0;
  double c = 1.0;  // training C, kept for audits
};

// Trains on raw features; normalization is fitted inside and stored with the
// model. Decision score: sum_i alpha_i y_i K(sv_i, z(x)) + b.
SvmModel svm_train(const LabeledSet& raw, const TrainOptions& opts,
                   TrainDiagnostics* diag = nullptr);
double svm_score(const SvmModel& m, const std::vector<double>& raw_x);

// 1 / (dim * pooled per-dimension variance) on normalized data, guarded
// against degenerate variance.
double default_gamma(const std::vector<std::vector<double>>& normalized_xs);

void save_model(const std::string& path, const SvmModel& m);
SvmModel load_model(const std::string& path);

// Largest soft-margin optimality violation of the model on its raw training
// set; a finished training should leave this within a whisker of the
// trainer's tolerance.
double max_kkt_violation(const SvmModel& m, const LabeledSet& raw, double tol);

}  // namespace occlu
