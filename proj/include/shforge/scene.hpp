#pragma once

#include <array>
#include <string>
#include <vector>

#include "shforge/body_model.hpp"
#include "shforge/image.hpp"
#include "shforge/rng.hpp"
#include "shforge/sh.hpp"

namespace shforge {

enum class TextureSet { kCaesarLike, kClothedLike };

const char* texture_set_name(TextureSet set);
TextureSet texture_set_from_name(const std::string& name);

/// Everything randomized once per clip and held fixed across its frames.
struct SceneConfig {
  ShapeCoefficients shape;
  int texture_id = 0;
  TextureSet texture_set = TextureSet::kClothedLike;
  int background_id = 0;
  ShCoeffs light{};
  double camera_distance = 8.0;
  double camera_yaw = 0.0;
  uint64_t rng_seed = 0;
};

struct AssetBanks {
  struct Texture {
    ImageU8 image;
    TextureSet set = TextureSet::kClothedLike;
  };
  std::vector<Texture> textures;
  std::vector<ImageU8> backgrounds;
  std::vector<ShapeCoefficients> shape_bank;  // may be empty

  int texture_count() const { return static_cast<int>(textures.size()); }
  int background_count() const { return static_cast<int>(backgrounds.size()); }
  void validate() const;  // non-empty texture/background banks
};

/// Allowed bank indices for one draw (sorted). Used to carry the --max-clothing
/// restriction and the train/test asset holdout into sampling.
struct AssetPools {
  std::vector<int> textures;
  std::vector<int> backgrounds;
  std::vector<int> shapes;
};

AssetPools full_pools(const AssetBanks& banks);

/// Fallback content used when no bank directories are given: gradient
/// skin-tone textures, block-colored clothing textures and low-frequency
/// noise backgrounds. Content is fixed, independent of the dataset seed.
AssetBanks make_procedural_banks();

/// Mildly biased 9-coefficient lighting: every coefficient uniform in
/// [-0.7, 0.7], the ambient term redrawn from [0.5, 0.7] and the band-1
/// vertical (world +y) coefficient shifted by +0.3 and clamped.
ShCoeffs sample_lighting(Rng& rng);

/// Uniform pick from the bank when present, otherwise 10 unit normals
/// truncated to [-3, 3].
ShapeCoefficients sample_shape(Rng& rng, const std::vector<ShapeCoefficients>& bank,
                               const std::vector<int>& pool);

/// All per-clip parameters from the child RNG of (master_seed, clip_ordinal);
/// deterministic regardless of the order clips are generated in.
SceneConfig sample_scene(uint64_t master_seed, uint64_t clip_ordinal,
                         const AssetBanks& banks, const AssetPools& pools);
SceneConfig sample_scene(uint64_t master_seed, uint64_t clip_ordinal,
                         const AssetBanks& banks);

void validate_scene(const SceneConfig& scene, const AssetBanks& banks);

}  // namespace shforge
