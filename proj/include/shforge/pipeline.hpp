#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "shforge/dataset_io.hpp"
#include "shforge/motion.hpp"
#include "shforge/renderer.hpp"
#include "shforge/splitter.hpp"

namespace shforge {

struct GenerateOptions {
  std::filesystem::path out_dir;
  uint64_t seed = 0;
  int width = 320;
  int height = 240;
  double focal_mm = 60.0;
  double sensor_mm = 32.0;
  int clip_len = kDefaultClipLength;
  std::vector<double> overlaps = {0.3, 0.5, 0.7};
  int workers = 1;
  int max_clips = 0;     // 0 = unlimited
  int max_clothing = 0;  // 0 = unlimited texture ids
  bool overwrite = false;
  double split_target = 0.2;
  double split_tolerance = 0.03;
};

struct PlannedClip {
  int sequence_index = 0;
  Clip clip;
  uint64_t ordinal = 0;  // position in the deterministic plan order
  SceneConfig scene;
};

/// Deterministic description of everything `generate` will render: the clip
/// list in sorted (subject, sequence, overlap, start) order, the split (when
/// the roster has at least two subjects) and every per-clip scene drawn from
/// seed-derived child RNGs, with test clips restricted to held-out assets.
struct GenerationPlan {
  std::vector<MotionSequence> sequences;
  AssetBanks banks;
  CameraIntrinsics intrinsics;
  std::vector<PlannedClip> clips;
  std::optional<SplitAssignment> split;
};

GenerationPlan plan_generation(std::vector<MotionSequence> motions,
                               AssetBanks banks, const GenerateOptions& options);

using ProgressFn = std::function<void(size_t done, size_t total)>;

/// Renders and writes every planned clip (parallel across clips when
/// workers > 1) and the dataset manifest. Output is byte-identical for any
/// worker count.
DatasetManifest run_generation(const BodyModelDef& model,
                               const GenerationPlan& plan,
                               const GenerateOptions& options,
                               const ProgressFn& progress = {});

ClipRecord planned_clip_record(const GenerationPlan& plan, const PlannedClip& pc);

/// Bundled procedural inputs for `--toy` generation: four subjects with two
/// motion sequences each.
std::vector<MotionSequence> make_toy_motions();

}  // namespace shforge
