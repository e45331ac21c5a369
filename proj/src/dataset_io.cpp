#include "shforge/dataset_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "shforge/error.hpp"
#include "shforge/png_io.hpp"

static_assert(std::endian::native == std::endian::little,
              "raster container assumes a little-endian host");

namespace shforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kRasterMagic[4] = {'S', 'H', 'F', '1'};
constexpr uint32_t kMaxRasterDim = 1 << 14;

std::string frame_file(const char* prefix, int t, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04d.%s", prefix, t, ext);
  return buf;
}

json points_to_json(const Points2& p) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    rows.push_back({p(i, 0), p(i, 1)});
  return rows;
}

json points_to_json(const Points3& p) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    rows.push_back({p(i, 0), p(i, 1), p(i, 2)});
  return rows;
}

Points2 points2_from_json(const json& rows) {
  Points2 p(rows.size(), 2);
  for (size_t i = 0; i < rows.size(); ++i) {
    p(static_cast<Eigen::Index>(i), 0) = rows[i].at(0).get<double>();
    p(static_cast<Eigen::Index>(i), 1) = rows[i].at(1).get<double>();
  }
  return p;
}

Points3 points3_from_json(const json& rows) {
  Points3 p(rows.size(), 3);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int k = 0; k < 3; ++k)
      p(static_cast<Eigen::Index>(i), k) = rows[i].at(k).get<double>();
  return p;
}

json scene_to_json(const SceneConfig& scene) {
  json j;
  j["rng_seed"] = scene.rng_seed;
  j["shape"] = scene.shape.beta;
  j["texture_id"] = scene.texture_id;
  j["texture_set"] = texture_set_name(scene.texture_set);
  j["background_id"] = scene.background_id;
  j["light"] = scene.light;
  j["camera_distance"] = scene.camera_distance;
  j["camera_yaw"] = scene.camera_yaw;
  return j;
}

SceneConfig scene_from_json(const json& j) {
  SceneConfig scene;
  scene.rng_seed = j.at("rng_seed").get<uint64_t>();
  const auto shape = j.at("shape").get<std::vector<double>>();
  require(shape.size() == kShapeCoeffCount, "scene: bad shape length");
  std::copy(shape.begin(), shape.end(), scene.shape.beta.begin());
  scene.texture_id = j.at("texture_id").get<int>();
  scene.texture_set = texture_set_from_name(j.at("texture_set").get<std::string>());
  scene.background_id = j.at("background_id").get<int>();
  const auto light = j.at("light").get<std::vector<double>>();
  require(light.size() == kShCoeffCount, "scene: bad light length");
  std::copy(light.begin(), light.end(), scene.light.begin());
  scene.camera_distance = j.at("camera_distance").get<double>();
  scene.camera_yaw = j.at("camera_yaw").get<double>();
  return scene;
}

void validate_labels(const ImageU8& img, int max_label, const char* what) {
  for (uint8_t v : img.pixels())
    require(v <= max_label, std::string("invalid label in ") + what);
}

}  // namespace

void write_raster(const fs::path& path, const ImageF32& img, uint32_t frame_index) {
  require(!img.empty(), "write_raster: empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for write: " + path.string());

  const uint32_t header[5] = {static_cast<uint32_t>(img.width()),
                              static_cast<uint32_t>(img.height()),
                              static_cast<uint32_t>(img.channels()),
                              frame_index, 0};
  out.write(kRasterMagic, 4);
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(img.data()),
            static_cast<std::streamsize>(img.size() * sizeof(float)));
  if (!out) throw IoError("write failed: " + path.string());
}

ImageF32 read_raster(const fs::path& path, uint32_t* frame_index) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());

  char magic[4];
  uint32_t header[5];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  require(in.good(), "corrupt raster: truncated header in " + path.string());
  require(std::memcmp(magic, kRasterMagic, 4) == 0,
          "corrupt raster: bad magic in " + path.string());

  const uint32_t w = header[0], h = header[1], c = header[2];
  require(w > 0 && h > 0 && w <= kMaxRasterDim && h <= kMaxRasterDim,
          "corrupt raster: bad dimensions in " + path.string());
  require(c >= 1 && c <= 4, "corrupt raster: bad channel count in " + path.string());
  if (frame_index) *frame_index = header[3];

  ImageF32 img(static_cast<int>(w), static_cast<int>(h), static_cast<int>(c));
  in.read(reinterpret_cast<char*>(img.data()),
          static_cast<std::streamsize>(img.size() * sizeof(float)));
  require(in.gcount() ==
              static_cast<std::streamsize>(img.size() * sizeof(float)),
          "corrupt raster: truncated payload in " + path.string());
  in.peek();
  require(in.eof(), "corrupt raster: trailing bytes in " + path.string());
  return img;
}

std::string clip_dir_name(const ClipRecord& record) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s_o%02d_c%04d", record.sequence_id.c_str(),
                static_cast<int>(round_half_up(record.overlap * 100.0)),
                record.clip_index);
  return buf;
}

bool SplitAssignment::is_test_subject(const std::string& id) const {
  const auto it = subjects.find(id);
  return it != subjects.end() && it->second == "test";
}

BankCatalog catalog_of(const AssetBanks& banks) {
  BankCatalog cat;
  cat.texture_sets.reserve(banks.textures.size());
  for (const auto& t : banks.textures) cat.texture_sets.push_back(t.set);
  cat.background_count = banks.background_count();
  cat.shape_count = static_cast<int>(banks.shape_bank.size());
  return cat;
}

void write_clip(const ClipRecord& record, const CameraIntrinsics& intr,
                const CameraPose& camera, std::span<const FramePasses> frames,
                const fs::path& out_root, bool overwrite) {
  require(record.frame_count == static_cast<int>(frames.size()),
          "write_clip: frame count mismatch");

  const fs::path subject_dir = out_root / record.subject_id;
  const fs::path final_dir = subject_dir / clip_dir_name(record);
  const fs::path tmp_dir = subject_dir / ("." + clip_dir_name(record) + ".tmp");

  std::error_code ec;
  if (fs::exists(final_dir)) {
    if (!overwrite)
      throw IoError("clip directory already exists: " + final_dir.string());
    fs::remove_all(final_dir, ec);
    if (ec) throw IoError("cannot remove existing clip: " + final_dir.string());
  }
  fs::remove_all(tmp_dir, ec);

  try {
    fs::create_directories(tmp_dir);
  } catch (const fs::filesystem_error& e) {
    throw IoError(std::string("cannot create clip directory: ") + e.what());
  }

  json meta;
  meta["version"] = "sh-forge-clip/1";
  meta["subject_id"] = record.subject_id;
  meta["sequence_id"] = record.sequence_id;
  if (!record.action.empty()) meta["action"] = record.action;
  meta["overlap"] = record.overlap;
  meta["clip_index"] = record.clip_index;
  meta["start_frame"] = record.start_frame;
  meta["frame_count"] = record.frame_count;
  meta["fps"] = record.fps;
  meta["scene"] = scene_to_json(record.scene);

  json cam;
  cam["width"] = intr.width;
  cam["height"] = intr.height;
  cam["fx"] = intr.fx;
  cam["fy"] = intr.fy;
  cam["cx"] = intr.cx;
  cam["cy"] = intr.cy;
  std::vector<double> rot(camera.rotation.data(),
                          camera.rotation.data() + 9);  // column-major
  cam["rotation"] = rot;
  cam["translation"] = {camera.translation.x(), camera.translation.y(),
                        camera.translation.z()};
  meta["camera"] = std::move(cam);

  json frame_meta = json::array();
  for (size_t t = 0; t < frames.size(); ++t) {
    const FramePasses& p = frames[t];
    json fj;
    fj["joints2d"] = points_to_json(p.joints2d);
    fj["joints3d"] = points_to_json(p.joints3d);
    fj["joints_behind"] = p.joints_behind;
    fj["flow_valid"] = p.flow_valid;
    frame_meta.push_back(std::move(fj));

    const int ti = static_cast<int>(t);
    write_png(tmp_dir / frame_file("rgb", ti, "png"), p.rgb);
    write_png(tmp_dir / frame_file("segm", ti, "png"), p.segm);
    write_png(tmp_dir / frame_file("dlab", ti, "png"), p.depth_labels);
    write_raster(tmp_dir / frame_file("depth", ti, "shf"), p.depth_m,
                 static_cast<uint32_t>(t));
    write_raster(tmp_dir / frame_file("normal", ti, "shf"), p.normals,
                 static_cast<uint32_t>(t));
    write_raster(tmp_dir / frame_file("flow", ti, "shf"), p.flow,
                 static_cast<uint32_t>(t));
  }
  meta["frames"] = std::move(frame_meta);

  {
    std::ofstream out(tmp_dir / "scene.json");
    if (!out) throw IoError("cannot write scene.json in " + tmp_dir.string());
    out << meta.dump(2) << '\n';
    if (!out) throw IoError("write failed: scene.json in " + tmp_dir.string());
  }

  fs::rename(tmp_dir, final_dir, ec);
  if (ec) throw IoError("cannot finalize clip directory: " + final_dir.string());
}

LoadedClip read_clip(const fs::path& clip_dir) {
  const fs::path meta_path = clip_dir / "scene.json";
  std::ifstream in(meta_path);
  if (!in) throw IoError("cannot open: " + meta_path.string());

  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed scene.json: ") + e.what());
  }

  LoadedClip clip;
  try {
    require(meta.value("version", "") == "sh-forge-clip/1",
            "malformed scene.json: unsupported version");
    clip.record.subject_id = meta.at("subject_id").get<std::string>();
    clip.record.sequence_id = meta.at("sequence_id").get<std::string>();
    clip.record.action = meta.value("action", "");
    clip.record.overlap = meta.at("overlap").get<double>();
    clip.record.clip_index = meta.at("clip_index").get<int>();
    clip.record.start_frame = meta.at("start_frame").get<int>();
    clip.record.frame_count = meta.at("frame_count").get<int>();
    clip.record.fps = meta.at("fps").get<double>();
    clip.record.scene = scene_from_json(meta.at("scene"));

    const json& cam = meta.at("camera");
    clip.intrinsics.width = cam.at("width").get<int>();
    clip.intrinsics.height = cam.at("height").get<int>();
    clip.intrinsics.fx = cam.at("fx").get<double>();
    clip.intrinsics.fy = cam.at("fy").get<double>();
    clip.intrinsics.cx = cam.at("cx").get<double>();
    clip.intrinsics.cy = cam.at("cy").get<double>();
    const auto rot = cam.at("rotation").get<std::vector<double>>();
    require(rot.size() == 9, "malformed scene.json: bad rotation");
    std::copy(rot.begin(), rot.end(), clip.camera.rotation.data());
    const auto trans = cam.at("translation").get<std::vector<double>>();
    require(trans.size() == 3, "malformed scene.json: bad translation");
    clip.camera.translation = Vec3(trans[0], trans[1], trans[2]);

    const json& frame_meta = meta.at("frames");
    require(static_cast<int>(frame_meta.size()) == clip.record.frame_count,
            "malformed scene.json: frame_count mismatch");

    clip.frames.resize(frame_meta.size());
    for (size_t t = 0; t < frame_meta.size(); ++t) {
      FramePasses& p = clip.frames[t];
      const int ti = static_cast<int>(t);

      p.rgb = read_png(clip_dir / frame_file("rgb", ti, "png"));
      require(p.rgb.channels() == 3, "rgb pass must be RGB");
      p.segm = read_png(clip_dir / frame_file("segm", ti, "png"));
      require(p.segm.channels() == 1, "segm pass must be single channel");
      validate_labels(p.segm, kPartCount, "segmentation pass");
      p.depth_labels = read_png(clip_dir / frame_file("dlab", ti, "png"));
      require(p.depth_labels.channels() == 1, "depth label pass must be single channel");
      validate_labels(p.depth_labels, 19, "depth label pass");

      uint32_t stored_index = 0;
      p.depth_m = read_raster(clip_dir / frame_file("depth", ti, "shf"), &stored_index);
      require(stored_index == t, "corrupt raster: frame index mismatch");
      require(p.depth_m.channels() == 1, "depth pass must be single channel");
      p.normals = read_raster(clip_dir / frame_file("normal", ti, "shf"));
      require(p.normals.channels() == 3, "normal pass must have 3 channels");
      p.flow = read_raster(clip_dir / frame_file("flow", ti, "shf"));
      require(p.flow.channels() == 2, "flow pass must have 2 channels");

      const int w = clip.intrinsics.width;
      const int h = clip.intrinsics.height;
      require(p.rgb.width() == w && p.rgb.height() == h &&
                  p.segm.width() == w && p.segm.height() == h &&
                  p.depth_labels.width() == w && p.depth_labels.height() == h &&
                  p.depth_m.width() == w && p.depth_m.height() == h &&
                  p.normals.width() == w && p.normals.height() == h &&
                  p.flow.width() == w && p.flow.height() == h,
              "pass dimensions do not match the camera");

      const json& fj = frame_meta[t];
      p.joints2d = points2_from_json(fj.at("joints2d"));
      p.joints3d = points3_from_json(fj.at("joints3d"));
      p.joints_behind = fj.at("joints_behind").get<std::vector<uint8_t>>();
      p.flow_valid = fj.at("flow_valid").get<bool>();
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed scene.json: ") + e.what());
  }

  clip.record.dir = fs::path(clip.record.subject_id).append(clip_dir_name(clip.record)).generic_string();
  return clip;
}

namespace {

json split_to_json(const SplitAssignment& split) {
  json j;
  j["subjects"] = split.subjects;
  j["test_texture_ids"] = split.test_texture_ids;
  j["test_background_ids"] = split.test_background_ids;
  j["test_shape_ids"] = split.test_shape_ids;
  return j;
}

SplitAssignment split_from_json(const json& j) {
  SplitAssignment split;
  split.subjects = j.at("subjects").get<std::map<std::string, std::string>>();
  for (const auto& [id, side] : split.subjects)
    require(side == "train" || side == "test",
            "malformed manifest: bad split side for subject " + id);
  split.test_texture_ids = j.at("test_texture_ids").get<std::vector<int>>();
  split.test_background_ids = j.at("test_background_ids").get<std::vector<int>>();
  split.test_shape_ids = j.value("test_shape_ids", std::vector<int>{});
  return split;
}

}  // namespace

void write_manifest(const DatasetManifest& manifest, const fs::path& dataset_root) {
  std::set<std::string> identities;
  json clips = json::array();
  for (const ClipRecord& r : manifest.clips) {
    const std::string key = r.subject_id + "/" + clip_dir_name(r);
    require(identities.insert(key).second, "duplicate clip identity: " + key);
    json cj;
    cj["subject_id"] = r.subject_id;
    cj["sequence_id"] = r.sequence_id;
    if (!r.action.empty()) cj["action"] = r.action;
    cj["overlap"] = r.overlap;
    cj["clip_index"] = r.clip_index;
    cj["start_frame"] = r.start_frame;
    cj["frame_count"] = r.frame_count;
    cj["fps"] = r.fps;
    cj["dir"] = r.dir;
    clips.push_back(std::move(cj));
  }

  json doc;
  doc["version"] = manifest.version;
  doc["master_seed"] = manifest.master_seed;
  doc["clips"] = std::move(clips);

  json banks;
  json sets = json::array();
  for (TextureSet s : manifest.banks.texture_sets) sets.push_back(texture_set_name(s));
  banks["texture_sets"] = std::move(sets);
  banks["background_count"] = manifest.banks.background_count;
  banks["shape_count"] = manifest.banks.shape_count;
  doc["banks"] = std::move(banks);

  if (manifest.split) doc["split"] = split_to_json(*manifest.split);

  const fs::path path = dataset_root / "manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

DatasetManifest read_manifest(const fs::path& dataset_root) {
  const fs::path path = dataset_root / "manifest.json";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }

  DatasetManifest manifest;
  try {
    manifest.version = doc.at("version").get<std::string>();
    require(manifest.version == "sh-forge-dataset/1",
            "malformed manifest: unsupported version");
    manifest.master_seed = doc.at("master_seed").get<uint64_t>();

    std::set<std::string> identities;
    for (const json& cj : doc.at("clips")) {
      ClipRecord r;
      r.subject_id = cj.at("subject_id").get<std::string>();
      r.sequence_id = cj.at("sequence_id").get<std::string>();
      r.action = cj.value("action", "");
      r.overlap = cj.at("overlap").get<double>();
      r.clip_index = cj.at("clip_index").get<int>();
      r.start_frame = cj.at("start_frame").get<int>();
      r.frame_count = cj.at("frame_count").get<int>();
      r.fps = cj.at("fps").get<double>();
      r.dir = cj.at("dir").get<std::string>();
      const std::string key = r.subject_id + "/" + clip_dir_name(r);
      require(identities.insert(key).second, "duplicate clip identity: " + key);
      manifest.clips.push_back(std::move(r));
    }

    if (doc.contains("banks")) {
      const json& banks = doc.at("banks");
      for (const json& s : banks.at("texture_sets"))
        manifest.banks.texture_sets.push_back(
            texture_set_from_name(s.get<std::string>()));
      manifest.banks.background_count = banks.at("background_count").get<int>();
      manifest.banks.shape_count = banks.value("shape_count", 0);
    }

    if (doc.contains("split")) manifest.split = split_from_json(doc.at("split"));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
  return manifest;
}

DatasetStats dataset_stats(const DatasetManifest& manifest) {
  struct Bucket {
    std::set<std::string> subjects;
    std::set<std::string> sequences;
    int clips = 0;
    int64_t frames = 0;
  };
  std::map<std::string, Bucket> buckets;
  Bucket total;

  const bool split = manifest.split.has_value();
  for (const ClipRecord& r : manifest.clips) {
    const std::string row =
        split ? (manifest.split->is_test_subject(r.subject_id) ? "test" : "train")
              : "all";
    for (Bucket* b : {&buckets[row], &total}) {
      b->subjects.insert(r.subject_id);
      b->sequences.insert(r.subject_id + "/" + r.sequence_id);
      b->clips += 1;
      b->frames += r.frame_count;
    }
  }
  if (split) {
    buckets.try_emplace("train");
    buckets.try_emplace("test");
  } else if (buckets.empty()) {
    buckets.try_emplace("all");
  }

  auto to_stats = [](const Bucket& b) {
    SplitStats s;
    s.subjects = static_cast<int>(b.subjects.size());
    s.sequences = static_cast<int>(b.sequences.size());
    s.clips = b.clips;
    s.frames = b.frames;
    return s;
  };

  DatasetStats stats;
  // Fixed row order: train before test.
  for (const std::string& name : {std::string("train"), std::string("test"),
                                  std::string("all")}) {
    const auto it = buckets.find(name);
    if (it != buckets.end()) stats.rows.emplace_back(name, to_stats(it->second));
  }
  stats.total = to_stats(total);
  return stats;
}

std::string format_stats_table(const DatasetStats& stats) {
  std::ostringstream out;
  auto row = [&out](const std::string& name, const SplitStats& s) {
    out << name;
    for (size_t i = name.size(); i < 8; ++i) out << ' ';
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%12d %12d %12d %14lld", s.subjects,
                  s.sequences, s.clips, static_cast<long long>(s.frames));
    out << buf << '\n';
  };
  out << "        "
      << "   #subjects   #sequences       #clips        #frames\n";
  for (const auto& [name, s] : stats.rows) row(name, s);
  row("total", stats.total);
  return out.str();
}

AssetBanks load_banks(const fs::path& textures_dir, const fs::path& backgrounds_dir,
                      const fs::path& shapes_json) {
  AssetBanks banks;

  auto sorted_pngs = [](const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".png")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
  };

  if (!textures_dir.empty()) {
    require(fs::is_directory(textures_dir),
            "texture directory not found: " + textures_dir.string());
    for (const fs::path& file : sorted_pngs(textures_dir)) {
      ImageU8 img = read_png(file);
      require(img.channels() == 3, "texture must be RGB: " + file.string());
      const std::string name = file.filename().string();
      const TextureSet set = name.find("caesar") != std::string::npos
                                 ? TextureSet::kCaesarLike
                                 : TextureSet::kClothedLike;
      banks.textures.push_back({std::move(img), set});
    }
    require(!banks.textures.empty(),
            "no PNG textures in " + textures_dir.string());
  }
  if (!backgrounds_dir.empty()) {
    require(fs::is_directory(backgrounds_dir),
            "background directory not found: " + backgrounds_dir.string());
    for (const fs::path& file : sorted_pngs(backgrounds_dir)) {
      ImageU8 img = read_png(file);
      require(img.channels() == 3, "background must be RGB: " + file.string());
      banks.backgrounds.push_back(std::move(img));
    }
    require(!banks.backgrounds.empty(),
            "no PNG backgrounds in " + backgrounds_dir.string());
  }

  // Procedural fallbacks keep the engine usable without asset data.
  const AssetBanks fallback =
      (banks.textures.empty() || banks.backgrounds.empty())
          ? make_procedural_banks()
          : AssetBanks{};
  if (banks.textures.empty()) banks.textures = fallback.textures;
  if (banks.backgrounds.empty()) banks.backgrounds = fallback.backgrounds;

  if (!shapes_json.empty()) {
    std::ifstream in(shapes_json);
    if (!in) throw IoError("cannot open shape bank: " + shapes_json.string());
    json doc;
    try {
      doc = json::parse(in);
      require(doc.is_array(), "shape bank must be a JSON array");
      for (const json& row : doc) {
        const auto values = row.get<std::vector<double>>();
        require(values.size() == kShapeCoeffCount,
                "shape bank entries must have 10 coefficients");
        ShapeCoefficients shape;
        std::copy(values.begin(), values.end(), shape.beta.begin());
        shape.validate();
        banks.shape_bank.push_back(shape);
      }
    } catch (const json::exception& e) {
      throw Error(std::string("malformed shape bank: ") + e.what());
    }
  }

  banks.validate();
  return banks;
}

}  // namespace shforge
