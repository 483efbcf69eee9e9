#include "occlu/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "occlu/error.hpp"

namespace occlu {

namespace {

constexpr double kAlphaEps = 1e-9;  // below this an alpha is treated as zero
constexpr double kStdFloor = 1e-8;

void require_set(const LabeledSet& s) {
  if (s.x.empty()) throw InvalidInput("svm: empty training set");
  if (s.x.size() != s.y.size()) {
    throw InvalidInput("svm: feature/label count mismatch");
  }
  const size_t dim = s.x[0].size();
  if (dim == 0) throw InvalidInput("svm: zero-dimensional features");
  bool pos = false, neg = false;
  for (size_t i = 0; i < s.x.size(); ++i) {
    if (s.x[i].size() != dim) {
      throw InvalidInput("svm: inconsistent feature dimensions");
    }
    if (s.y[i] == 1) pos = true;
    else if (s.y[i] == -1) neg = true;
    else throw InvalidInput("svm: labels must be +1 or -1");
  }
  if (!pos || !neg) throw InvalidInput("svm: need both classes to train");
}

// SMO working state over a precomputed Gram matrix.
struct Smo {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  const TrainOptions& opts;
  int n;
  std::vector<double> gram;  // n*n
  std::vector<double> alpha, err;
  double b = 0.0;
  long steps = 0;
  std::mt19937_64 pick;
  TrainDiagnostics* diag;

  Smo(const std::vector<std::vector<double>>& x_,
      const std::vector<int>& y_, const TrainOptions& o,
      TrainDiagnostics* d)
      : x(x_), y(y_), opts(o), n(static_cast<int>(x_.size())),
        gram(size_t(n) * n), alpha(n, 0.0), err(n, 0.0),
        pick(o.seed * 0x9E3779B97F4A7C15ull + 1), diag(d) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double k = kernel_eval(opts.kernel, x[i], x[j]);
        gram[size_t(i) * n + j] = k;
        gram[size_t(j) * n + i] = k;
      }
    }
    recompute_errors();
  }

  double k(int i, int j) const { return gram[size_t(i) * n + j]; }

  double decision(int i) const {
    double f = b;
    for (int j = 0; j < n; ++j) {
      if (alpha[j] > kAlphaEps) f += alpha[j] * y[j] * k(j, i);
    }
    return f;
  }

  void recompute_errors() {
    for (int i = 0; i < n; ++i) err[i] = decision(i) - y[i];
  }

  bool non_bound(int i) const {
    return alpha[i] > kAlphaEps && alpha[i] < opts.c - kAlphaEps;
  }

  double dual_objective() const {
    double obj = 0.0;
    for (int i = 0; i < n; ++i) {
      if (alpha[i] <= kAlphaEps) continue;
      obj += alpha[i];
      for (int j = 0; j < n; ++j) {
        if (alpha[j] <= kAlphaEps) continue;
        obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * k(i, j);
      }
    }
    return obj;
  }

  bool take_step(int i1, int i2) {
    if (i1 == i2) return false;
    const double a1_old = alpha[i1], a2_old = alpha[i2];
    const int y1 = y[i1], y2 = y[i2];
    const double e1 = err[i1], e2 = err[i2];
    const double s = y1 * y2;
    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2_old - a1_old);
      hi = std::min(opts.c, opts.c + a2_old - a1_old);
    } else {
      lo = std::max(0.0, a1_old + a2_old - opts.c);
      hi = std::min(opts.c, a1_old + a2_old);
    }
    if (lo >= hi) return false;
    const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;
    if (eta <= 0.0) return false;  // degenerate direction; skip the pair
    double a2 = a2_old + y2 * (e1 - e2) / eta;
    a2 = std::clamp(a2, lo, hi);
    if (std::abs(a2 - a2_old) < 1e-12 * (a2 + a2_old + 1e-12)) return false;
    double a1 = a1_old + s * (a2_old - a2);
    a1 = std::clamp(a1, 0.0, opts.c);

    const double d1 = y1 * (a1 - a1_old), d2 = y2 * (a2 - a2_old);
    const double b1 = b - e1 - d1 * k11 - d2 * k12;
    const double b2 = b - e2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1 > kAlphaEps && a1 < opts.c - kAlphaEps) b_new = b1;
    else if (a2 > kAlphaEps && a2 < opts.c - kAlphaEps) b_new = b2;
    else b_new = 0.5 * (b1 + b2);

    const double db = b_new - b;
    for (int j = 0; j < n; ++j) {
      err[j] += d1 * k(i1, j) + d2 * k(i2, j) + db;
    }
    alpha[i1] = a1;
    alpha[i2] = a2;
    b = b_new;
    ++steps;
    if (diag && opts.record_trace) diag->dual_trace.push_back(dual_objective());
    return true;
  }

  int second_choice(int i2) {
    // prefer the non-bound point with the largest |E1 - E2|
    int best = -1;
    double best_gap = -1.0;
    for (int i = 0; i < n; ++i) {
      if (!non_bound(i)) continue;
      const double gap = std::abs(err[i] - err[i2]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    return best;
  }

  bool examine(int i2) {
    const double r2 = err[i2] * y[i2];
    const bool violates = (r2 < -opts.tol && alpha[i2] < opts.c - kAlphaEps) ||
                          (r2 > opts.tol && alpha[i2] > kAlphaEps);
    if (!violates) return false;
    const int i1 = second_choice(i2);
    if (i1 >= 0 && take_step(i1, i2)) return true;
    const int start = static_cast<int>(pick() % static_cast<uint64_t>(n));
    for (int off = 0; off < n; ++off) {
      const int i = (start + off) % n;
      if (non_bound(i) && take_step(i, i2)) return true;
    }
    const int start2 = static_cast<int>(pick() % static_cast<uint64_t>(n));
    for (int off = 0; off < n; ++off) {
      const int i = (start2 + off) % n;
      if (take_step(i, i2)) return true;
    }
    return false;
  }

  bool run() {  // returns converged
    bool examine_all = true;
    int full_passes = 0, quick_passes = 0;
    while (full_passes < opts.max_full_passes) {
      int changed = 0;
      if (examine_all) {
        recompute_errors();
        ++full_passes;
        for (int i = 0; i < n; ++i) changed += examine(i);
        if (changed == 0) {
          if (diag) diag->full_passes = full_passes;
          return true;
        }
        examine_all = false;
        quick_passes = 0;
      } else {
        for (int i = 0; i < n; ++i) {
          if (non_bound(i)) changed += examine(i);
        }
        ++quick_passes;
        if (changed == 0 || quick_passes >= opts.max_quick_passes) {
          examine_all = true;
        }
      }
    }
    if (diag) diag->full_passes = full_passes;
    return false;
  }
};

}  // namespace

double kernel_eval(const Kernel& k, const std::vector<double>& a,
                   const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw InvalidInput("kernel: dimension mismatch");
  }
  if (k.kind == KernelKind::Linear) {
    double dot = 0.0;
    for (size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
  }
  double d2 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-k.gamma * d2);
}

NormStats fit_norm(const std::vector<std::vector<double>>& xs) {
  if (xs.empty()) throw InvalidInput("norm: empty set");
  const size_t dim = xs[0].size();
  NormStats st;
  st.mean.assign(dim, 0.0);
  st.stdev.assign(dim, 0.0);
  for (const auto& x : xs) {
    if (x.size() != dim) throw InvalidInput("norm: inconsistent dimensions");
    for (size_t d = 0; d < dim; ++d) st.mean[d] += x[d];
  }
  for (double& m : st.mean) m /= xs.size();
  for (const auto& x : xs) {
    for (size_t d = 0; d < dim; ++d) {
      const double c = x[d] - st.mean[d];
      st.stdev[d] += c * c;
    }
  }
  for (double& v : st.stdev) {
    v = std::sqrt(v / xs.size());
    if (v < kStdFloor) v = kStdFloor;
  }
  return st;
}

std::vector<double> apply_norm(const NormStats& norm,
                               const std::vector<double>& x) {
  if (x.size() != norm.mean.size()) {
    throw InvalidInput("norm: dimension mismatch");
  }
  std::vector<double> z(x.size());
  for (size_t d = 0; d < x.size(); ++d) {
    z[d] = (x[d] - norm.mean[d]) / norm.stdev[d];
  }
  return z;
}

double default_gamma(const std::vector<std::vector<double>>& normalized_xs) {
  if (normalized_xs.empty() || normalized_xs[0].empty()) {
    throw InvalidInput("default_gamma: empty set");
  }
  const size_t dim = normalized_xs[0].size();
  std::vector<double> mean(dim, 0.0);
  for (const auto& x : normalized_xs) {
    for (size_t d = 0; d < dim; ++d) mean[d] += x[d];
  }
  for (double& m : mean) m /= normalized_xs.size();
  double pooled = 0.0;
  for (const auto& x : normalized_xs) {
    for (size_t d = 0; d < dim; ++d) {
      const double c = x[d] - mean[d];
      pooled += c * c;
    }
  }
  pooled /= double(normalized_xs.size()) * dim;
  if (pooled < 1e-12) pooled = 1.0;
  return 1.0 / (double(dim) * pooled);
}

SvmModel svm_train(const LabeledSet& raw, const TrainOptions& opts,
                   TrainDiagnostics* diag) {
  require_set(raw);
  if (opts.c <= 0.0) throw InvalidInput("svm: C must be positive");
  if (opts.kernel.kind == KernelKind::Rbf && opts.kernel.gamma <= 0.0) {
    throw InvalidInput("svm: gamma must be positive");
  }

  SvmModel m;
  m.kernel = opts.kernel;
  m.c = opts.c;
  m.norm = fit_norm(raw.x);
  std::vector<std::vector<double>> z;
  z.reserve(raw.x.size());
  for (const auto& x : raw.x) z.push_back(apply_norm(m.norm, x));

  TrainDiagnostics local;
  TrainDiagnostics* d = diag ? diag : &local;
  Smo smo(z, raw.y, opts, d);
  d->converged = smo.run();
  d->steps = smo.steps;

  m.b = smo.b;
  for (int i = 0; i < smo.n; ++i) {
    if (smo.alpha[i] > kAlphaEps) {
      m.sv_x.push_back(z[i]);
      m.sv_alpha.push_back(smo.alpha[i]);
      m.sv_y.push_back(raw.y[i]);
    }
  }
  return m;
}

double svm_score(const SvmModel& m, const std::vector<double>& raw_x) {
  const std::vector<double> z = apply_norm(m.norm, raw_x);
  double f = m.b;
  for (size_t i = 0; i < m.sv_x.size(); ++i) {
    f += m.sv_alpha[i] * m.sv_y[i] * kernel_eval(m.kernel, m.sv_x[i], z);
  }
  return f;
}

double max_kkt_violation(const SvmModel& m, const LabeledSet& raw,
                         double tol) {
  require_set(raw);
  // recover per-sample alphas by matching normalized vectors to the SVs
  double worst = 0.0;
  for (size_t i = 0; i < raw.x.size(); ++i) {
    const std::vector<double> z = apply_norm(m.norm, raw.x[i]);
    double alpha = 0.0;
    for (size_t s = 0; s < m.sv_x.size(); ++s) {
      if (m.sv_y[s] == raw.y[i] && m.sv_x[s] == z) {
        alpha = m.sv_alpha[s];
        break;
      }
    }
    double f = m.b;
    for (size_t s = 0; s < m.sv_x.size(); ++s) {
      f += m.sv_alpha[s] * m.sv_y[s] * kernel_eval(m.kernel, m.sv_x[s], z);
    }
    const double margin = raw.y[i] * f;
    double excess = 0.0;
    if (alpha <= kAlphaEps) {
      excess = std::max(0.0, (1.0 - tol) - margin);
    } else if (alpha >= m.c - kAlphaEps) {
      excess = std::max(0.0, margin - (1.0 + tol));
    } else {
      excess = std::max(0.0, std::abs(margin - 1.0) - tol);
    }
    worst = std::max(worst, excess);
  }
  return worst;
}

void save_model(const std::string& path, const SvmModel& m) {
  nlohmann::ordered_json j;
  j["kernel"] = m.kernel.kind == KernelKind::Linear ? "linear" : "rbf";
  if (m.kernel.kind == KernelKind::Rbf) j["gamma"] = m.kernel.gamma;
  j["c"] = m.c;
  j["b"] = m.b;
  j["norm"] = {{"mean", m.norm.mean}, {"stdev", m.norm.stdev}};
  nlohmann::ordered_json svs = nlohmann::ordered_json::array();
  for (size_t i = 0; i < m.sv_x.size(); ++i) {
    svs.push_back({{"alpha", m.sv_alpha[i]}, {"y", m.sv_y[i]}, {"x", m.sv_x[i]}});
  }
  j["support_vectors"] = std::move(svs);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

SvmModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw FormatError("model is not valid JSON: " + path);
  SvmModel m;
  try {
    const std::string kind = j.at("kernel").get<std::string>();
    if (kind == "linear") m.kernel.kind = KernelKind::Linear;
    else if (kind == "rbf") m.kernel.kind = KernelKind::Rbf;
    else throw FormatError("unknown kernel kind: " + kind);
    if (m.kernel.kind == KernelKind::Rbf) {
      m.kernel.gamma = j.at("gamma").get<double>();
    }
    m.c = j.at("c").get<double>();
    m.b = j.at("b").get<double>();
    m.norm.mean = j.at("norm").at("mean").get<std::vector<double>>();
    m.norm.stdev = j.at("norm").at("stdev").get<std::vector<double>>();
    for (const auto& sv : j.at("support_vectors")) {
      m.sv_alpha.push_back(sv.at("alpha").get<double>());
      m.sv_y.push_back(sv.at("y").get<int>());
      m.sv_x.push_back(sv.at("x").get<std::vector<double>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("model " + path + ": " + e.what());
  }
  if (m.norm.mean.size() != m.norm.stdev.size()) {
    throw FormatError("model " + path + ": inconsistent normalizer");
  }
  for (const auto& x : m.sv_x) {
    if (x.size() != m.norm.mean.size()) {
      throw FormatError("model " + path + ": inconsistent support vectors");
    }
  }
  return m;
}

}  // namespace occlu
