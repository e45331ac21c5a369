#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shforge/camera.hpp"
#include "shforge/renderer.hpp"
#include "shforge/scene.hpp"

namespace shforge {

/// Raw little-endian float32 raster with a 24-byte header:
/// magic "SHF1", u32 width, u32 height, u32 channels, u32 frame_index,
/// u32 reserved.
void write_raster(const std::filesystem::path& path, const ImageF32& img,
                  uint32_t frame_index);
ImageF32 read_raster(const std::filesystem::path& path,
                     uint32_t* frame_index = nullptr);

struct ClipRecord {
  std::string subject_id;
  std::string sequence_id;
  std::string action;  // optional
  double overlap = 0.3;
  int clip_index = 0;
  int start_frame = 0;
  int frame_count = 0;
  double fps = 30.0;
  std::string dir;  // dataset-root relative
  SceneConfig scene;
};

/// Directory name `<sequence>_o<percent>_c<index>` under `<subject>/`.
std::string clip_dir_name(const ClipRecord& record);

struct SplitAssignment {
  std::map<std::string, std::string> subjects;  // id -> "train" | "test"
  std::vector<int> test_texture_ids;
  std::vector<int> test_background_ids;
  std::vector<int> test_shape_ids;

  bool is_test_subject(const std::string& id) const;
};

/// Asset bank catalog persisted with the manifest so re-splits know the id
/// space without the image payloads.
struct BankCatalog {
  std::vector<TextureSet> texture_sets;  // one entry per texture id
  int background_count = 0;
  int shape_count = 0;
};

BankCatalog catalog_of(const AssetBanks& banks);

struct DatasetManifest {
  std::string version = "sh-forge-dataset/1";
  uint64_t master_seed = 0;
  std::vector<ClipRecord> clips;
  BankCatalog banks;
  std::optional<SplitAssignment> split;
};

/// Writes one clip directory (six pass files per frame + scene.json) under
/// out_root. The write is atomic: files land in a temp directory that is
/// renamed into place.
void write_clip(const ClipRecord& record, const CameraIntrinsics& intr,
                const CameraPose& camera, std::span<const FramePasses> frames,
                const std::filesystem::path& out_root, bool overwrite = false);

struct LoadedClip {
  ClipRecord record;
  CameraIntrinsics intrinsics;
  CameraPose camera;
  std::vector<FramePasses> frames;
};

LoadedClip read_clip(const std::filesystem::path& clip_dir);

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& dataset_root);
DatasetManifest read_manifest(const std::filesystem::path& dataset_root);

struct SplitStats {
  int subjects = 0;
  int sequences = 0;
  int clips = 0;
  int64_t frames = 0;
};

/// Rows keyed "train"/"test" when a split is assigned, otherwise "all";
/// "total" always present and equal to the sum of the rows.
struct DatasetStats {
  std::vector<std::pair<std::string, SplitStats>> rows;
  SplitStats total;
};

DatasetStats dataset_stats(const DatasetManifest& manifest);
std::string format_stats_table(const DatasetStats& stats);

/// Loads texture/background banks from directories of PNGs, ids assigned in
/// sorted filename order. Texture filenames containing "caesar" are tagged
/// caesar_like, the rest clothed_like. Empty/missing paths fall back to the
/// procedural banks. The optional shape bank is a JSON array of 10-vectors.
AssetBanks load_banks(const std::filesystem::path& textures_dir,
                      const std::filesystem::path& backgrounds_dir,
                      const std::filesystem::path& shapes_json);

}  // namespace shforge
