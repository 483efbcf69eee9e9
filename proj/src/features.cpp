#include "occlu/features.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "occlu/error.hpp"

namespace occlu {

namespace {

constexpr double kEps = 1e-12;

void require_gray(const Image& img, const char* who) {
  if (img.channels != 1) {
    throw InvalidInput(std::string(who) + ": expected a single-channel image");
  }
}

// clockwise from the top-left neighbor
constexpr int kNbrDx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
constexpr int kNbrDy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};

const std::array<int, 256>& bin_table() {
  static const std::array<int, 256> table = [] {
    std::array<int, 256> t{};
    int next = 0;
    for (int c = 0; c < 256; ++c) {
      t[c] = circular_transitions(static_cast<uint8_t>(c)) <= 2 ? next++ : -1;
    }
    for (int c = 0; c < 256; ++c) {
      if (t[c] < 0) t[c] = kLbpBins - 1;
    }
    return t;
  }();
  return table;
}

}  // namespace

int circular_transitions(uint8_t code) {
  const uint8_t rot = static_cast<uint8_t>((code << 1) | (code >> 7));
  return std::popcount(static_cast<uint8_t>(code ^ rot));
}

int uniform_bin(uint8_t code) { return bin_table()[code]; }

uint8_t lbp_code(const Image& gray, int x, int y) {
  require_gray(gray, "lbp_code");
  if (x < 1 || y < 1 || x >= gray.width - 1 || y >= gray.height - 1) {
    throw InvalidInput("lbp_code: pixel has no full 8-neighborhood");
  }
  const uint8_t c = gray.at(x, y, 0);
  uint8_t code = 0;
  for (int k = 0; k < 8; ++k) {
    if (gray.at(x + kNbrDx[k], y + kNbrDy[k], 0) >= c) {
      code = static_cast<uint8_t>(code | (1u << k));
    }
  }
  return code;
}

Image lbp_map(const Image& gray) {
  require_gray(gray, "lbp_map");
  if (gray.width < 3 || gray.height < 3) {
    throw InvalidInput("lbp_map: image smaller than 3x3");
  }
  Image out(gray.width - 2, gray.height - 2, 1);
  for (int y = 1; y < gray.height - 1; ++y) {
    for (int x = 1; x < gray.width - 1; ++x) {
      out.at(x - 1, y - 1, 0) = lbp_code(gray, x, y);
    }
  }
  return out;
}

std::vector<double> lbp_histogram(const Image& gray) {
  const Image codes = lbp_map(gray);
  std::vector<double> hist(kLbpBins, 0.0);
  for (const uint8_t c : codes.data) hist[uniform_bin(c)] += 1.0;
  const double total = static_cast<double>(codes.data.size());
  for (double& v : hist) v /= total;
  return hist;
}

// ---------------------------------------------------------------------------

const char* const kIqmNames[kIqmCount] = {"mse", "psnr", "snr", "sc",
                                          "md",  "ad",   "nae", "lmse",
                                          "ncc", "ted",  "gme", "hist_chi2"};

namespace {

double sobel_mag(const Image& g, int x, int y) {
  const auto p = [&](int dx, int dy) {
    return static_cast<double>(g.at(x + dx, y + dy, 0));
  };
  const double gx = -p(-1, -1) + p(1, -1) - 2 * p(-1, 0) + 2 * p(1, 0) -
                    p(-1, 1) + p(1, 1);
  const double gy = -p(-1, -1) - 2 * p(0, -1) - p(1, -1) + p(-1, 1) +
                    2 * p(0, 1) + p(1, 1);
  return std::hypot(gx, gy);
}

double laplacian(const Image& g, int x, int y) {
  return 4.0 * g.at(x, y, 0) - g.at(x, y - 1, 0) - g.at(x, y + 1, 0) -
         g.at(x - 1, y, 0) - g.at(x + 1, y, 0);
}

}  // namespace

std::vector<double> iqm_measures(const Image& gray, const Image& ref) {
  require_gray(gray, "iqm_measures");
  require_gray(ref, "iqm_measures");
  if (!gray.same_shape(ref)) {
    throw InvalidInput("iqm_measures: image and reference shapes differ");
  }
  const size_t n = gray.data.size();
  if (n == 0) throw InvalidInput("iqm_measures: empty image");

  double sum_d2 = 0.0, sum_d = 0.0, sum_ad = 0.0, max_ad = 0.0;
  double sum_i2 = 0.0, sum_r2 = 0.0, sum_ir = 0.0, sum_ai = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const double i = gray.data[k], r = ref.data[k], d = i - r;
    sum_d2 += d * d;
    sum_d += d;
    sum_ad += std::abs(d);
    max_ad = std::max(max_ad, std::abs(d));
    sum_i2 += i * i;
    sum_r2 += r * r;
    sum_ir += i * r;
    sum_ai += std::abs(i);
  }
  const double mse = sum_d2 / n;
  const double psnr =
      mse <= 0.0 ? 100.0 : std::min(100.0, 10.0 * std::log10(255.0 * 255.0 / mse));
  const double snr =
      std::min(100.0, 10.0 * std::log10((sum_i2 + kEps) / (sum_d2 + kEps)));
  const double sc = sum_i2 / (sum_r2 + kEps);
  const double ad = sum_d / n;
  const double nae = sum_ad / (sum_ai + kEps);
  const double ncc = sum_ir / (sum_i2 + kEps);

  double lmse = 0.0, ted = 0.0, gme = 0.0;
  long interior = 0;
  if (gray.width >= 3 && gray.height >= 3) {
    for (int y = 1; y < gray.height - 1; ++y) {
      for (int x = 1; x < gray.width - 1; ++x) {
        const double dl = laplacian(gray, x, y) - laplacian(ref, x, y);
        lmse += dl * dl;
        const double ds = sobel_mag(gray, x, y) - sobel_mag(ref, x, y);
        ted += std::abs(ds);
        gme += ds * ds;
        ++interior;
      }
    }
    lmse /= interior;
    ted /= interior;
    gme /= interior;
  }

  double hist_i[32] = {0}, hist_r[32] = {0};
  for (size_t k = 0; k < n; ++k) {
    hist_i[gray.data[k] / 8] += 1.0;
    hist_r[ref.data[k] / 8] += 1.0;
  }
  double chi2 = 0.0;
  for (int b = 0; b < 32; ++b) {
    const double hi = hist_i[b] / n, hr = hist_r[b] / n;
    chi2 += (hi - hr) * (hi - hr) / (hi + hr + kEps);
  }

  return {mse, psnr, snr, sc, max_ad, ad, nae, lmse, ncc, ted, gme, chi2};
}

std::vector<double> iqm_vector(const Image& gray) {
  require_gray(gray, "iqm_vector");
  return iqm_measures(gray, gaussian_blur(gray, 0.5));
}

// ---------------------------------------------------------------------------

const char* const kMotionNames[5] = {"ratio_mean", "ratio_std", "face_mean",
                                     "bg_mean", "face_bg_ratio"};

MotionSignal motion_signal(const std::vector<Image>& gray_frames,
                           const Box& face_box) {
  if (gray_frames.size() < 2) {
    throw InvalidInput("motion: need at least two frames");
  }
  for (const Image& f : gray_frames) {
    require_gray(f, "motion");
    if (!f.same_shape(gray_frames[0])) {
      throw InvalidInput("motion: mismatched frame dimensions");
    }
  }
  const int w = gray_frames[0].width, h = gray_frames[0].height;
  const int x0 = std::clamp(static_cast<int>(std::floor(face_box.min_x)), 0, w - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor(face_box.min_y)), 0, h - 1);
  const int x1 = std::clamp(static_cast<int>(std::ceil(face_box.max_x)), 0, w - 1);
  const int y1 = std::clamp(static_cast<int>(std::ceil(face_box.max_y)), 0, h - 1);
  const long face_count = long(x1 - x0 + 1) * (y1 - y0 + 1);
  const long bg_count = long(w) * h - face_count;
  if (bg_count == 0) {
    throw InvalidInput("motion: face box covers the whole frame, no background");
  }

  MotionSignal sig;
  for (size_t t = 1; t < gray_frames.size(); ++t) {
    const Image& a = gray_frames[t - 1];
    const Image& b = gray_frames[t];
    double face_sum = 0.0, total_sum = 0.0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double d = std::abs(double(b.at(x, y, 0)) - double(a.at(x, y, 0)));
        total_sum += d;
        if (x >= x0 && x <= x1 && y >= y0 && y <= y1) face_sum += d;
      }
    }
    const double df = face_sum / face_count;
    const double db = (total_sum - face_sum) / bg_count;
    sig.face.push_back(df);
    sig.bg.push_back(db);
    sig.ratio.push_back(df / (df + db + 1e-6));
  }
  return sig;
}

std::vector<double> motion_features(const MotionSignal& sig) {
  const size_t n = sig.ratio.size();
  if (n == 0) throw InvalidInput("motion features: empty signal");
  double rm = 0.0, fm = 0.0, bm = 0.0;
  for (size_t i = 0; i < n; ++i) {
    rm += sig.ratio[i];
    fm += sig.face[i];
    bm += sig.bg[i];
  }
  rm /= n;
  fm /= n;
  bm /= n;
  double var = 0.0;
  for (const double r : sig.ratio) var += (r - rm) * (r - rm);
  var /= n;
  return {rm, std::sqrt(var), fm, bm, fm / (bm + 1e-6)};
}

// ---------------------------------------------------------------------------

void write_feature_csv(const std::string& path,
                       const std::vector<std::string>& columns,
                       std::vector<FeatureRow> rows) {
  for (const FeatureRow& r : rows) {
    if (r.values.size() != columns.size()) {
      throw InvalidInput("feature csv: row width does not match header");
    }
    if (r.label != "bonafide" && r.label != "attack") {
      throw InvalidInput("feature csv: bad label: " + r.label);
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const FeatureRow& a, const FeatureRow& b) {
                     if (a.sample_id != b.sample_id) {
                       return a.sample_id < b.sample_id;
                     }
                     return a.frame < b.frame;
                   });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write feature csv: " + path);
  out << "sample_id,frame,label";
  for (const std::string& c : columns) out << "," << c;
  out << "\n";
  char buf[64];
  for (const FeatureRow& r : rows) {
    out << r.sample_id << "," << r.frame << "," << r.label;
    for (const double v : r.values) {
      std::snprintf(buf, sizeof buf, "%.9g", v);
      out << "," << buf;
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

FeatureTable read_feature_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open feature csv: " + path);
  FeatureTable table;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("feature csv is empty: " + path);
  {
    std::stringstream ss(line);
    std::string cell;
    int idx = 0;
    while (std::getline(ss, cell, ',')) {
      if (idx == 0 && cell != "sample_id") {
        throw FormatError("feature csv: unexpected header: " + path);
      }
      if (idx >= 3) table.columns.push_back(cell);
      ++idx;
    }
    if (idx < 4) throw FormatError("feature csv: header has no value columns");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    FeatureRow row;
    int idx = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        if (idx == 0) row.sample_id = cell;
        else if (idx == 1) row.frame = std::stoi(cell);
        else if (idx == 2) row.label = cell;
        else row.values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw FormatError("feature csv line " + std::to_string(lineno) +
                          ": bad cell: " + cell);
      }
      ++idx;
    }
    if (row.values.size() != table.columns.size()) {
      throw FormatError("feature csv line " + std::to_string(lineno) +
                        ": wrong column count");
    }
    if (row.label != "bonafide" && row.label != "attack") {
      throw FormatError("feature csv line " + std::to_string(lineno) +
                        ": bad label: " + row.label);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace occlu
