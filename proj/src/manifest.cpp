#include "occlu/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "occlu/error.hpp"

namespace fs = std::filesystem;

namespace occlu {

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open manifest: " + path);
  std::vector<ManifestEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw FormatError(path + " line " + std::to_string(lineno) +
                        ": invalid JSON");
    }
    ManifestEntry e;
    try {
      e.id = j.at("id").get<std::string>();
      e.frames_dir = j.at("frames_dir").get<std::string>();
      e.landmarks_path = j.at("landmarks_path").get<std::string>();
      e.label = j.at("label").get<std::string>();
      if (j.contains("attack_kind") && !j["attack_kind"].is_null()) {
        e.attack_kind = j["attack_kind"].get<std::string>();
      }
      if (j.contains("partition") && !j["partition"].is_null()) {
        e.partition = j["partition"].get<std::string>();
      }
      e.subject = j.at("subject").get<std::string>();
      if (j.contains("fallback_frames")) {
        e.fallback_frames = j["fallback_frames"].get<int>();
      }
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError(path + " line " + std::to_string(lineno) + ": " +
                        ex.what());
    }
    if (e.label != "bonafide" && e.label != "attack") {
      throw FormatError(path + ": sample " + e.id + ": label must be " +
                        "\"bonafide\" or \"attack\", got \"" + e.label + "\"");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open manifest for writing: " + path);
  for (const ManifestEntry& e : entries) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["frames_dir"] = e.frames_dir;
    j["landmarks_path"] = e.landmarks_path;
    j["label"] = e.label;
    if (e.attack_kind.empty()) {
      j["attack_kind"] = nullptr;
    } else {
      j["attack_kind"] = e.attack_kind;
    }
    j["partition"] = e.partition;
    j["subject"] = e.subject;
    if (e.fallback_frames > 0) j["fallback_frames"] = e.fallback_frames;
    f << j.dump() << "\n";
  }
  f.flush();
  if (!f) throw IoError("failed to write manifest: " + path);
}

std::string resolve_path(const std::string& manifest_path,
                         const std::string& entry_path) {
  fs::path p(entry_path);
  if (p.is_absolute()) return p.string();
  return (fs::path(manifest_path).parent_path() / p).string();
}

std::vector<std::string> list_frames(const std::string& frames_dir) {
  if (!fs::is_directory(frames_dir)) {
    throw IoError("frames directory not found: " + frames_dir);
  }
  std::vector<std::string> out;
  for (const auto& de : fs::directory_iterator(frames_dir)) {
    if (!de.is_regular_file()) continue;
    const std::string name = de.path().filename().string();
    if (name.rfind("frame_", 0) == 0 && de.path().extension() == ".ppm") {
      out.push_back(de.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int frame_index_from_name(const std::string& path) {
  const std::string name = fs::path(path).stem().string();
  if (name.rfind("frame_", 0) != 0) return -1;
  const std::string digits = name.substr(6);
  if (digits.empty() ||
      digits.find_first_not_of("0123456789") != std::string::npos) {
    return -1;
  }
  return std::stoi(digits);
}

}  // namespace occlu
