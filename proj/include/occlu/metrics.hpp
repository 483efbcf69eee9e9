#pragma once

#include <string>
#include <vector>

namespace occlu {

// Score convention throughout: higher means more bona-fide-like, and a sample
// is accepted exactly when score >= threshold.

struct ScoreSet {
  std::vector<double> bonafide, attack;
};

struct RatePair {
  double far = 0.0;  // % of attacks accepted
  double frr = 0.0;  // % of bonafide rejected
};

RatePair far_frr(const ScoreSet& s, double threshold);
double hter(const ScoreSet& s, double threshold);  // (FAR + FRR) / 2

struct EerResult {
  double threshold = 0.0;
  double eer = 0.0;
  double far = 0.0, frr = 0.0;
};

// Scans -inf, the midpoints between adjacent distinct pooled scores, and
// +inf; picks the smallest threshold minimizing |FAR - FRR|.
EerResult eer_threshold(const ScoreSet& s);

struct PadRates {
  double apcer = 0.0;  // % of attacks accepted (pooled over species)
  double bpcer = 0.0;  // % of bonafide rejected
  double acer = 0.0;
};

PadRates apcer_bpcer_acer(const ScoreSet& s, double threshold);

// Percent with two decimals; the value is rounded half-to-even at the second
// decimal before formatting.
std::string format_rate(double v);

struct ReportRow {
  std::string protocol, occlusion, extractor;
  double threshold = 0.0;
  double far = 0.0, frr = 0.0, hter = 0.0;
  double apcer = 0.0, bpcer = 0.0, acer = 0.0;
  int n_bonafide = 0, n_attack = 0;
  int n_unoccluded_fallback = 0;
};

void write_report_csv(const std::string& path,
                      const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report_csv(const std::string& path);
std::string report_markdown(const std::vector<ReportRow>& rows);

}  // namespace occlu
