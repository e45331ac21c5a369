#include "shforge/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "shforge/error.hpp"

namespace shforge {

const char* texture_set_name(TextureSet set) {
  return set == TextureSet::kCaesarLike ? "caesar_like" : "clothed_like";
}

TextureSet texture_set_from_name(const std::string& name) {
  if (name == "caesar_like") return TextureSet::kCaesarLike;
  if (name == "clothed_like") return TextureSet::kClothedLike;
  throw Error("unknown texture set: " + name);
}

void AssetBanks::validate() const {
  require(!textures.empty(), "texture bank is empty");
  require(!backgrounds.empty(), "background bank is empty");
  for (const Texture& t : textures)
    require(!t.image.empty() && t.image.channels() == 3, "texture must be RGB");
  for (const ImageU8& b : backgrounds)
    require(!b.empty() && b.channels() == 3, "background must be RGB");
  for (const ShapeCoefficients& s : shape_bank) s.validate();
}

AssetPools full_pools(const AssetBanks& banks) {
  AssetPools pools;
  pools.textures.resize(banks.textures.size());
  std::iota(pools.textures.begin(), pools.textures.end(), 0);
  pools.backgrounds.resize(banks.backgrounds.size());
  std::iota(pools.backgrounds.begin(), pools.backgrounds.end(), 0);
  pools.shapes.resize(banks.shape_bank.size());
  std::iota(pools.shapes.begin(), pools.shapes.end(), 0);
  return pools;
}

namespace {

constexpr uint64_t kProceduralAssetSeed = 0xA55E75;
constexpr double kCaesarFraction = 0.2;

// Mid-saturation palette shared by the procedural assets.
struct Rgb {
  uint8_t r, g, b;
};

constexpr Rgb kSkinTones[] = {{243, 210, 188}, {224, 186, 154}, {198, 152, 120},
                              {168, 122, 92},  {126, 86, 62},   {92, 60, 42}};
constexpr Rgb kClothColors[] = {{171, 43, 36},  {40, 92, 159}, {52, 130, 70},
                                {222, 177, 49}, {92, 64, 130}, {212, 118, 42},
                                {58, 58, 64},   {180, 180, 176}};

ImageU8 make_skin_texture(int id) {
  Rng rng(seed_combine(kProceduralAssetSeed, 100 + id));
  const Rgb base = kSkinTones[id % std::size(kSkinTones)];
  const double jitter = rng.uniform(-12.0, 12.0);
  ImageU8 img(256, 256, 3);
  for (int y = 0; y < 256; ++y) {
    const double shade = 0.85 + 0.15 * (1.0 - y / 255.0);
    for (int x = 0; x < 256; ++x) {
      const double ripple = 6.0 * std::sin(x * 0.11) * std::sin(y * 0.07);
      auto px = [&](double c) {
        return static_cast<uint8_t>(std::clamp(c * shade + jitter + ripple, 0.0, 255.0));
      };
      img.at(x, y, 0) = px(base.r);
      img.at(x, y, 1) = px(base.g);
      img.at(x, y, 2) = px(base.b);
    }
  }
  return img;
}

ImageU8 make_cloth_texture(int id) {
  Rng rng(seed_combine(kProceduralAssetSeed, 200 + id));
  const Rgb shirt = kClothColors[rng.index(std::size(kClothColors))];
  const Rgb pants = kClothColors[rng.index(std::size(kClothColors))];
  const Rgb skin = kSkinTones[rng.index(std::size(kSkinTones))];
  const int checker = 8 << rng.index(3);
  ImageU8 img(256, 256, 3);
  for (int y = 0; y < 256; ++y) {
    // v < 0.35 legs/feet, mid band torso/arms, v > 0.9 head band.
    const double v = y / 255.0;
    Rgb base = v < 0.35 ? pants : (v > 0.9 ? skin : shirt);
    for (int x = 0; x < 256; ++x) {
      const bool dark = ((x / checker) + (y / checker)) % 2 == 0;
      const double k = dark ? 0.82 : 1.0;
      img.at(x, y, 0) = static_cast<uint8_t>(std::min(255.0, base.r * k));
      img.at(x, y, 1) = static_cast<uint8_t>(std::min(255.0, base.g * k));
      img.at(x, y, 2) = static_cast<uint8_t>(std::min(255.0, base.b * k));
    }
  }
  return img;
}

ImageU8 make_noise_background(int id) {
  Rng rng(seed_combine(kProceduralAssetSeed, 300 + id));
  constexpr int gw = 9, gh = 7;
  std::array<Rgb, gw * gh> grid;
  const Rgb tint = kClothColors[rng.index(std::size(kClothColors))];
  for (Rgb& cell : grid) {
    const double mix = rng.uniform(0.2, 1.0);
    const double gray = rng.uniform(40.0, 215.0);
    cell.r = static_cast<uint8_t>(gray * (1.0 - mix) + tint.r * mix);
    cell.g = static_cast<uint8_t>(gray * (1.0 - mix) + tint.g * mix);
    cell.b = static_cast<uint8_t>(gray * (1.0 - mix) + tint.b * mix);
  }

  ImageU8 img(384, 288, 3);
  for (int y = 0; y < img.height(); ++y) {
    const double gy = y / double(img.height() - 1) * (gh - 1);
    const int y0 = std::min(static_cast<int>(gy), gh - 2);
    const double fy = gy - y0;
    for (int x = 0; x < img.width(); ++x) {
      const double gx = x / double(img.width() - 1) * (gw - 1);
      const int x0 = std::min(static_cast<int>(gx), gw - 2);
      const double fx = gx - x0;
      auto lerp2 = [&](auto pick) {
        const double top = pick(grid[y0 * gw + x0]) * (1 - fx) +
                           pick(grid[y0 * gw + x0 + 1]) * fx;
        const double bot = pick(grid[(y0 + 1) * gw + x0]) * (1 - fx) +
                           pick(grid[(y0 + 1) * gw + x0 + 1]) * fx;
        return top * (1 - fy) + bot * fy;
      };
      img.at(x, y, 0) = static_cast<uint8_t>(lerp2([](Rgb c) { return double(c.r); }));
      img.at(x, y, 1) = static_cast<uint8_t>(lerp2([](Rgb c) { return double(c.g); }));
      img.at(x, y, 2) = static_cast<uint8_t>(lerp2([](Rgb c) { return double(c.b); }));
    }
  }
  return img;
}

int pick_from(Rng& rng, const std::vector<int>& candidates) {
  return candidates[rng.index(candidates.size())];
}

}  // namespace

AssetBanks make_procedural_banks() {
  AssetBanks banks;
  for (int i = 0; i < 10; ++i)
    banks.textures.push_back({make_skin_texture(i), TextureSet::kCaesarLike});
  for (int i = 0; i < 10; ++i)
    banks.textures.push_back({make_cloth_texture(i), TextureSet::kClothedLike});
  for (int i = 0; i < 8; ++i) banks.backgrounds.push_back(make_noise_background(i));
  banks.validate();
  return banks;
}

ShCoeffs sample_lighting(Rng& rng) {
  ShCoeffs c{};
  for (double& v : c) v = rng.uniform(-0.7, 0.7);
  c[0] = rng.uniform(0.5, 0.7);  // ambient floor
  c[1] = std::clamp(c[1] + 0.3, -0.7, 0.7);  // bias light from above (+y)
  return c;
}

ShapeCoefficients sample_shape(Rng& rng, const std::vector<ShapeCoefficients>& bank,
                               const std::vector<int>& pool) {
  ShapeCoefficients shape;
  if (!bank.empty() && !pool.empty()) {
    shape = bank[static_cast<size_t>(pick_from(rng, pool))];
  } else {
    for (double& b : shape.beta) b = rng.truncated_normal(-3.0, 3.0);
  }
  shape.validate();
  return shape;
}

SceneConfig sample_scene(uint64_t master_seed, uint64_t clip_ordinal,
                         const AssetBanks& banks, const AssetPools& pools) {
  banks.validate();
  require(!pools.textures.empty(), "texture pool is empty");
  require(!pools.backgrounds.empty(), "background pool is empty");

  SceneConfig cfg;
  cfg.rng_seed = seed_combine(master_seed, clip_ordinal);
  Rng rng(cfg.rng_seed);

  // Draw order is part of the format: shape, texture, background, lighting,
  // camera distance, yaw.
  cfg.shape = sample_shape(rng, banks.shape_bank, pools.shapes);

  const TextureSet wanted = rng.uniform() < kCaesarFraction
                                ? TextureSet::kCaesarLike
                                : TextureSet::kClothedLike;
  std::vector<int> candidates;
  for (int id : pools.textures)
    if (banks.textures[static_cast<size_t>(id)].set == wanted)
      candidates.push_back(id);
  if (candidates.empty()) candidates = pools.textures;
  cfg.texture_id = pick_from(rng, candidates);
  cfg.texture_set = banks.textures[static_cast<size_t>(cfg.texture_id)].set;

  cfg.background_id = pick_from(rng, pools.backgrounds);
  cfg.light = sample_lighting(rng);
  do {
    cfg.camera_distance = rng.normal(8.0, 1.0);
  } while (cfg.camera_distance <= 0.5);
  cfg.camera_yaw = rng.uniform(0.0, 2.0 * std::numbers::pi);

  validate_scene(cfg, banks);
  return cfg;
}

SceneConfig sample_scene(uint64_t master_seed, uint64_t clip_ordinal,
                         const AssetBanks& banks) {
  return sample_scene(master_seed, clip_ordinal, banks, full_pools(banks));
}

void validate_scene(const SceneConfig& scene, const AssetBanks& banks) {
  scene.shape.validate();
  require(scene.texture_id >= 0 && scene.texture_id < banks.texture_count(),
          "texture id out of bank range");
  require(scene.background_id >= 0 && scene.background_id < banks.background_count(),
          "background id out of bank range");
  for (double c : scene.light)
    require(c >= -0.7 && c <= 0.7, "lighting coefficient out of range");
  require(scene.light[0] >= 0.5 && scene.light[0] <= 0.7,
          "ambient coefficient out of range");
  require(scene.camera_distance > 0.0, "camera distance must be positive");
}

}  // namespace shforge
