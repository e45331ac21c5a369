#include "shforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include "shforge/error.hpp"
#include "shforge/rng.hpp"

namespace shforge {

namespace fs = std::filesystem;

namespace {

AssetPools restrict_pools(const AssetPools& full, const SplitAssignment& split,
                          bool test_side) {
  auto side_ids = [test_side](const std::vector<int>& all,
                              const std::vector<int>& held_out) {
    std::vector<int> out;
    for (int id : all) {
      const bool held = std::binary_search(held_out.begin(), held_out.end(), id);
      if (held == test_side) out.push_back(id);
    }
    return out;
  };
  AssetPools pools;
  pools.textures = side_ids(full.textures, split.test_texture_ids);
  pools.backgrounds = side_ids(full.backgrounds, split.test_background_ids);
  pools.shapes = side_ids(full.shapes, split.test_shape_ids);
  // A side never goes empty when the holdout left ids behind; as a guard for
  // degenerate banks, fall back to the unrestricted pool.
  if (pools.textures.empty()) pools.textures = full.textures;
  if (pools.backgrounds.empty()) pools.backgrounds = full.backgrounds;
  if (pools.shapes.empty()) pools.shapes = full.shapes;
  return pools;
}

}  // namespace

ClipRecord planned_clip_record(const GenerationPlan& plan, const PlannedClip& pc) {
  const MotionSequence& seq = plan.sequences[static_cast<size_t>(pc.sequence_index)];
  ClipRecord record;
  record.subject_id = seq.subject_id;
  record.sequence_id = seq.sequence_id;
  record.action = seq.action;
  record.overlap = pc.clip.overlap;
  record.clip_index = pc.clip.clip_index;
  record.start_frame = pc.clip.start_frame;
  record.frame_count = pc.clip.length;
  record.fps = seq.fps;
  record.scene = pc.scene;
  record.dir = fs::path(record.subject_id).append(clip_dir_name(record)).generic_string();
  return record;
}

GenerationPlan plan_generation(std::vector<MotionSequence> motions,
                               AssetBanks banks, const GenerateOptions& options) {
  require(!motions.empty(), "no motion sequences given");
  banks.validate();
  for (const MotionSequence& seq : motions) seq.validate();
  require(!options.overlaps.empty(), "no overlap variants requested");

  GenerationPlan plan;
  plan.intrinsics = intrinsics_from_physical(options.focal_mm, options.sensor_mm,
                                             options.width, options.height);

  std::sort(motions.begin(), motions.end(),
            [](const MotionSequence& a, const MotionSequence& b) {
              return std::tie(a.subject_id, a.sequence_id) <
                     std::tie(b.subject_id, b.sequence_id);
            });
  for (size_t i = 1; i < motions.size(); ++i) {
    require(motions[i].subject_id != motions[i - 1].subject_id ||
                motions[i].sequence_id != motions[i - 1].sequence_id,
            "duplicate motion sequence: " + motions[i].subject_id + "/" +
                motions[i].sequence_id);
    require(motions[i].joint_count() == motions[0].joint_count(),
            "motion sequences disagree on joint count");
  }
  plan.sequences = std::move(motions);

  std::vector<double> overlaps = options.overlaps;
  std::sort(overlaps.begin(), overlaps.end());

  for (int s = 0; s < static_cast<int>(plan.sequences.size()); ++s) {
    for (double overlap : overlaps) {
      for (const Clip& clip :
           chunk_clips(plan.sequences[static_cast<size_t>(s)].frame_count(),
                       options.clip_len, overlap)) {
        PlannedClip pc;
        pc.sequence_index = s;
        pc.clip = clip;
        plan.clips.push_back(pc);
      }
    }
  }
  if (options.max_clips > 0 &&
      static_cast<int>(plan.clips.size()) > options.max_clips)
    plan.clips.resize(static_cast<size_t>(options.max_clips));
  for (size_t i = 0; i < plan.clips.size(); ++i) plan.clips[i].ordinal = i;

  plan.banks = std::move(banks);
  AssetPools pools = full_pools(plan.banks);
  if (options.max_clothing > 0 &&
      options.max_clothing < static_cast<int>(pools.textures.size()))
    pools.textures.resize(static_cast<size_t>(options.max_clothing));

  // The split is part of the plan so generation can enforce held-out assets.
  std::set<std::string> subjects;
  for (const PlannedClip& pc : plan.clips)
    subjects.insert(plan.sequences[static_cast<size_t>(pc.sequence_index)].subject_id);
  if (subjects.size() >= 2) {
    DatasetManifest roster;
    roster.master_seed = options.seed;
    for (const PlannedClip& pc : plan.clips)
      roster.clips.push_back(planned_clip_record(plan, pc));
    BankCatalog catalog;
    for (int id : pools.textures)
      catalog.texture_sets.push_back(plan.banks.textures[static_cast<size_t>(id)].set);
    catalog.background_count = static_cast<int>(pools.backgrounds.size());
    catalog.shape_count = static_cast<int>(pools.shapes.size());

    SplitOptions split_options;
    split_options.seed = options.seed;
    split_options.target_test_fraction = options.split_target;
    split_options.tolerance = options.split_tolerance;
    SplitAssignment split = assign_split(roster, catalog, split_options);

    // The catalog was indexed into the restricted pools; map back to bank ids.
    auto remap = [](const std::vector<int>& pool, std::vector<int> picked) {
      for (int& id : picked) id = pool[static_cast<size_t>(id)];
      std::sort(picked.begin(), picked.end());
      return picked;
    };
    split.test_texture_ids = remap(pools.textures, std::move(split.test_texture_ids));
    split.test_background_ids =
        remap(pools.backgrounds, std::move(split.test_background_ids));
    split.test_shape_ids = remap(pools.shapes, std::move(split.test_shape_ids));
    plan.split = std::move(split);
  }

  AssetPools train_pools = pools, test_pools = pools;
  if (plan.split) {
    train_pools = restrict_pools(pools, *plan.split, false);
    test_pools = restrict_pools(pools, *plan.split, true);
  }

  for (PlannedClip& pc : plan.clips) {
    const std::string& subject =
        plan.sequences[static_cast<size_t>(pc.sequence_index)].subject_id;
    const bool test = plan.split && plan.split->is_test_subject(subject);
    pc.scene = sample_scene(options.seed, pc.ordinal, plan.banks,
                            test ? test_pools : train_pools);
  }
  return plan;
}

DatasetManifest run_generation(const BodyModelDef& model,
                               const GenerationPlan& plan,
                               const GenerateOptions& options,
                               const ProgressFn& progress) {
  model.validate();
  require(!options.out_dir.empty(), "output directory not set");
  try {
    fs::create_directories(options.out_dir);
  } catch (const fs::filesystem_error& e) {
    throw IoError(std::string("cannot create output directory: ") + e.what());
  }

  const size_t total = plan.clips.size();
  std::atomic<size_t> next{0};
  std::atomic<size_t> done{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      const size_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        const PlannedClip& pc = plan.clips[i];
        const MotionSequence& seq =
            plan.sequences[static_cast<size_t>(pc.sequence_index)];
        const std::span<const PoseFrame> window(
            seq.frames.data() + pc.clip.start_frame,
            static_cast<size_t>(pc.clip.length));

        ClipRenderer renderer(model, pc.scene, plan.banks, plan.intrinsics, window);
        std::vector<FramePasses> frames;
        frames.reserve(window.size());
        for (int t = 0; t < renderer.frame_count(); ++t)
          frames.push_back(renderer.render_frame(t));

        const ClipRecord record = planned_clip_record(plan, pc);
        write_clip(record, plan.intrinsics, renderer.camera(), frames,
                   options.out_dir, options.overwrite);
        if (progress) progress(done.fetch_add(1) + 1, total);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_workers = std::max(1, options.workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  DatasetManifest manifest;
  manifest.master_seed = options.seed;
  manifest.banks = catalog_of(plan.banks);
  manifest.split = plan.split;
  manifest.clips.reserve(plan.clips.size());
  for (const PlannedClip& pc : plan.clips)
    manifest.clips.push_back(planned_clip_record(plan, pc));
  write_manifest(manifest, options.out_dir);
  return manifest;
}

std::vector<MotionSequence> make_toy_motions() {
  constexpr uint64_t kToyMotionSeed = 0x70ed;
  const struct {
    const char* subject;
    const char* sequence;
    int frames;
  } specs[] = {
      {"toy01", "amble01", 260}, {"toy01", "sway01", 140},
      {"toy02", "amble01", 260}, {"toy02", "sway01", 140},
      {"toy03", "amble01", 260}, {"toy03", "sway01", 140},
      {"toy04", "amble01", 260}, {"toy04", "sway01", 140},
  };

  std::vector<MotionSequence> motions;
  uint64_t stream = 0;
  for (const auto& spec : specs) {
    MotionSequence seq =
        generate_test_motion(seed_combine(kToyMotionSeed, stream++), spec.frames);
    seq.subject_id = spec.subject;
    seq.sequence_id = spec.sequence;
    motions.push_back(std::move(seq));
  }
  return motions;
}

}  // namespace shforge
