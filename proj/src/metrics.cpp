#include "occlu/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "occlu/error.hpp"

namespace occlu {

namespace {

void require_both(const ScoreSet& s, const char* who) {
  if (s.bonafide.empty() || s.attack.empty()) {
    throw InvalidInput(std::string(who) +
                       ": need scores from both classes");
  }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

RatePair far_frr(const ScoreSet& s, double threshold) {
  require_both(s, "far_frr");
  long fa = 0, fr = 0;
  for (const double v : s.attack) {
    if (v >= threshold) ++fa;
  }
  for (const double v : s.bonafide) {
    if (v < threshold) ++fr;
  }
  RatePair r;
  r.far = 100.0 * fa / s.attack.size();
  r.frr = 100.0 * fr / s.bonafide.size();
  return r;
}

double hter(const ScoreSet& s, double threshold) {
  const RatePair r = far_frr(s, threshold);
  return 0.5 * (r.far + r.frr);
}

EerResult eer_threshold(const ScoreSet& s) {
  require_both(s, "eer_threshold");
  std::vector<double> pooled;
  pooled.reserve(s.bonafide.size() + s.attack.size());
  pooled.insert(pooled.end(), s.bonafide.begin(), s.bonafide.end());
  pooled.insert(pooled.end(), s.attack.begin(), s.attack.end());
  for (const double v : pooled) {
    if (!std::isfinite(v)) throw InvalidInput("eer: non-finite score");
  }
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  std::vector<double> candidates;
  candidates.push_back(-kInf);
  for (size_t i = 1; i < pooled.size(); ++i) {
    candidates.push_back(0.5 * (pooled[i - 1] + pooled[i]));
  }
  candidates.push_back(kInf);

  EerResult best;
  double best_gap = kInf;
  for (const double tau : candidates) {
    const RatePair r = far_frr(s, tau);
    const double gap = std::abs(r.far - r.frr);
    if (gap < best_gap) {
      best_gap = gap;
      best.threshold = tau;
      best.far = r.far;
      best.frr = r.frr;
    }
  }
  best.eer = 0.5 * (best.far + best.frr);
  return best;
}

PadRates apcer_bpcer_acer(const ScoreSet& s, double threshold) {
  const RatePair r = far_frr(s, threshold);
  PadRates p;
  p.apcer = r.far;
  p.bpcer = r.frr;
  p.acer = 0.5 * (p.apcer + p.bpcer);
  return p;
}

std::string format_rate(double v) {
  const double rounded = std::nearbyint(v * 100.0) / 100.0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", rounded);
  return buf;
}

namespace {

const char* kReportHeader =
    "protocol,occlusion,extractor,threshold,far,frr,hter,apcer,bpcer,acer,"
    "n_bonafide,n_attack,n_unoccluded_fallback";

std::string g9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void write_report_csv(const std::string& path,
                      const std::vector<ReportRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report csv: " + path);
  out << kReportHeader << "\n";
  for (const ReportRow& r : rows) {
    out << r.protocol << "," << r.occlusion << "," << r.extractor << ","
        << g9(r.threshold) << "," << g9(r.far) << "," << g9(r.frr) << ","
        << g9(r.hter) << "," << g9(r.apcer) << "," << g9(r.bpcer) << ","
        << g9(r.acer) << "," << r.n_bonafide << "," << r.n_attack << ","
        << r.n_unoccluded_fallback << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<ReportRow> read_report_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report csv: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw FormatError("report csv: unexpected header: " + path);
  }
  std::vector<ReportRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 13) {
      throw FormatError("report csv line " + std::to_string(lineno) +
                        ": wrong column count");
    }
    ReportRow r;
    try {
      r.protocol = cells[0];
      r.occlusion = cells[1];
      r.extractor = cells[2];
      r.threshold = std::stod(cells[3]);
      r.far = std::stod(cells[4]);
      r.frr = std::stod(cells[5]);
      r.hter = std::stod(cells[6]);
      r.apcer = std::stod(cells[7]);
      r.bpcer = std::stod(cells[8]);
      r.acer = std::stod(cells[9]);
      r.n_bonafide = std::stoi(cells[10]);
      r.n_attack = std::stoi(cells[11]);
      r.n_unoccluded_fallback = std::stoi(cells[12]);
    } catch (const std::exception&) {
      throw FormatError("report csv line " + std::to_string(lineno) +
                        ": bad cell");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string report_markdown(const std::vector<ReportRow>& rows) {
  std::ostringstream md;
  md << "# presentation-attack detection under occlusion\n";
  std::vector<std::string> protocols;
  for (const ReportRow& r : rows) {
    if (std::find(protocols.begin(), protocols.end(), r.protocol) ==
        protocols.end()) {
      protocols.push_back(r.protocol);
    }
  }
  for (const std::string& proto : protocols) {
    md << "\n## protocol: " << proto << "\n\n";
    md << "| occlusion | extractor | threshold | FAR % | FRR % | HTER % |"
          " APCER % | BPCER % | ACER % | bonafide | attack | fallback |\n";
    md << "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const ReportRow& r : rows) {
      if (r.protocol != proto) continue;
      md << "| " << r.occlusion << " | " << r.extractor << " | "
         << g9(r.threshold) << " | " << format_rate(r.far) << " | "
         << format_rate(r.frr) << " | " << format_rate(r.hter) << " | "
         << format_rate(r.apcer) << " | " << format_rate(r.bpcer) << " | "
         << format_rate(r.acer) << " | " << r.n_bonafide << " | "
         << r.n_attack << " | " << r.n_unoccluded_fallback << " |\n";
    }
  }
  return md.str();
}

}  // namespace occlu
