#pragma once

#include <string>
#include <vector>

namespace occlu {

// One video sample. Paths are stored relative to the manifest file and
// resolved against its directory when read.
struct ManifestEntry {
  std::string id;
  std::string frames_dir;
  std::string landmarks_path;
  std::string label;        // "bonafide" | "attack"
  std::string attack_kind;  // "" for bonafide
  std::string partition;    // "train" | "dev" | "test" ("" before splitting)
  std::string subject;
  int fallback_frames = 0;  // frames an occlude pass left unmodified
};

// JSON Lines, one entry per line.
std::vector<ManifestEntry> read_manifest(const std::string& path);
void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries);

// Resolves an entry path against the directory containing the manifest.
std::string resolve_path(const std::string& manifest_path,
                         const std::string& entry_path);

// Sorted absolute paths of the frame_*.ppm files inside a frames directory.
std::vector<std::string> list_frames(const std::string& frames_dir);

// Frame index encoded in a frame_%04d.ppm basename; -1 if it does not match.
int frame_index_from_name(const std::string& path);

}  // namespace occlu
