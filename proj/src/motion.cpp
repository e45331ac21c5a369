#include "shforge/motion.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include <nlohmann/json.hpp>

#include "shforge/error.hpp"
#include "shforge/rng.hpp"

namespace shforge {

using nlohmann::json;

void MotionSequence::validate() const {
  require(!frames.empty(), "empty sequence");
  require(fps > 0.0, "fps must be positive");
  const int j = frames.front().joint_count();
  for (const PoseFrame& frame : frames) {
    require(frame.joint_count() == j, "frame joint counts differ");
    frame.validate();
  }
}

MotionSequence load_motion(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed motion: ") + e.what());
  }
  require(doc.is_object(), "malformed motion: not a JSON object");
  require(doc.value("version", "") == "sh-forge-motion/1",
          "malformed motion: unsupported version");

  MotionSequence seq;
  try {
    seq.subject_id = doc.at("subject_id").get<std::string>();
    seq.sequence_id = doc.at("sequence_id").get<std::string>();
    seq.action = doc.value("action", "");
    seq.fps = doc.at("fps").get<double>();

    const json& frames = doc.at("frames");
    require(frames.is_array(), "malformed motion: frames must be an array");
    for (const json& row : frames) {
      const auto values = row.get<std::vector<double>>();
      require(values.size() >= 6 && values.size() % 3 == 0,
              "malformed motion: bad frame row length");
      PoseFrame frame;
      frame.root_translation = Vec3(values[0], values[1], values[2]);
      const int joints = static_cast<int>(values.size() / 3) - 1;
      frame.joint_rotations.resize(joints);
      for (int j = 0; j < joints; ++j)
        frame.joint_rotations[j] =
            Vec3(values[3 + 3 * j], values[4 + 3 * j], values[5 + 3 * j]);
      seq.frames.push_back(std::move(frame));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed motion: ") + e.what());
  }

  seq.validate();
  return seq;
}

void save_motion(const MotionSequence& seq, std::ostream& out) {
  json doc;
  doc["version"] = "sh-forge-motion/1";
  doc["subject_id"] = seq.subject_id;
  doc["sequence_id"] = seq.sequence_id;
  if (!seq.action.empty()) doc["action"] = seq.action;
  doc["fps"] = seq.fps;
  json frames = json::array();
  for (const PoseFrame& frame : seq.frames) {
    std::vector<double> row;
    row.reserve(3 + frame.joint_rotations.size() * 3);
    for (int k = 0; k < 3; ++k) row.push_back(frame.root_translation[k]);
    for (const Vec3& r : frame.joint_rotations)
      for (int k = 0; k < 3; ++k) row.push_back(r[k]);
    frames.push_back(std::move(row));
  }
  doc["frames"] = std::move(frames);
  out << doc.dump() << '\n';
}

MotionSequence generate_test_motion(uint64_t seed, int n_frames, int n_joints) {
  require(n_frames >= 1, "generate_test_motion: need at least one frame");
  require(n_joints >= 1, "generate_test_motion: need at least one joint");

  Rng rng(seed);

  // Each channel is a mixture of three slow sinusoids; amplitudes chosen per
  // joint so the axis-angle magnitude stays well below 2*pi.
  struct Channel {
    double amp[3], freq[3], phase[3];
  };
  auto make_channel = [&rng](double amplitude) {
    Channel ch;
    for (int h = 0; h < 3; ++h) {
      ch.amp[h] = amplitude * rng.uniform(0.2, 1.0) / 3.0;
      ch.freq[h] = 2.0 * std::numbers::pi * rng.uniform(0.3, 2.0) / 100.0;
      ch.phase[h] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    return ch;
  };
  auto eval = [](const Channel& ch, double t) {
    double v = 0.0;
    for (int h = 0; h < 3; ++h) v += ch.amp[h] * std::sin(ch.freq[h] * t + ch.phase[h]);
    return v;
  };

  auto joint_amplitude = [n_joints](int j) {
    if (j == 0) return 0.5;                       // root orientation
    if (n_joints != 24) return 0.4;               // generic chain
    switch (j) {
      case 3: case 6: case 9: case 12: case 13: case 14: case 15:
        return 0.15;                              // spine, neck, collars, head
      case 1: case 2: case 4: case 5:
        return 0.5;                               // hips, knees
      case 16: case 17: case 18: case 19:
        return 0.55;                              // shoulders, elbows
      default:
        return 0.3;
    }
  };

  std::vector<Channel> channels;
  channels.reserve(3 + n_joints * 3);
  for (int k = 0; k < 3; ++k) channels.push_back(make_channel(k == 1 ? 0.0 : 0.8));
  for (int j = 0; j < n_joints; ++j) {
    const double amp = joint_amplitude(j);
    for (int k = 0; k < 3; ++k) channels.push_back(make_channel(amp));
  }

  MotionSequence seq;
  seq.subject_id = "gen";
  seq.sequence_id = "gen" + std::to_string(seed);
  seq.fps = 30.0;
  seq.frames.resize(n_frames);
  for (int t = 0; t < n_frames; ++t) {
    PoseFrame& frame = seq.frames[t];
    frame.root_translation =
        Vec3(eval(channels[0], t), eval(channels[1], t), eval(channels[2], t));
    frame.joint_rotations.resize(n_joints);
    for (int j = 0; j < n_joints; ++j)
      frame.joint_rotations[j] = Vec3(eval(channels[3 + 3 * j], t),
                                      eval(channels[4 + 3 * j], t),
                                      eval(channels[5 + 3 * j], t));
  }
  seq.validate();
  return seq;
}

std::vector<Clip> chunk_clips(int n_frames, int clip_len, double overlap) {
  require(n_frames >= 1, "chunk_clips: empty sequence");
  require(clip_len >= 1, "chunk_clips: clip length must be positive");
  const bool known = std::any_of(std::begin(kOverlapVariants),
                                 std::end(kOverlapVariants),
                                 [overlap](double v) { return std::abs(v - overlap) < 1e-9; });
  require(known, "chunk_clips: unsupported overlap variant");

  const int stride =
      static_cast<int>(round_half_up(clip_len * (1.0 - overlap)));
  std::vector<Clip> clips;
  int index = 0;
  for (int start = 0; start < n_frames; start += stride) {
    Clip clip;
    clip.start_frame = start;
    clip.length = std::min(clip_len, n_frames - start);
    clip.overlap = overlap;
    clip.clip_index = index++;
    clips.push_back(clip);
  }
  return clips;
}

}  // namespace shforge
