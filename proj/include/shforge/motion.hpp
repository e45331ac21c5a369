#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "shforge/body_model.hpp"

namespace shforge {

struct MotionSequence {
  std::string subject_id;
  std::string sequence_id;
  std::string action;  // optional tag, empty when absent
  double fps = 30.0;
  std::vector<PoseFrame> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
  int joint_count() const {
    return frames.empty() ? 0 : frames.front().joint_count();
  }
  void validate() const;
};

/// A window of at most clip_len frames, rendered with one fixed scene
/// configuration. clip_index numbers the windows of one (sequence, overlap)
/// stream.
struct Clip {
  int start_frame = 0;
  int length = 0;
  double overlap = 0.0;
  int clip_index = 0;
};

inline constexpr int kDefaultClipLength = 100;
inline constexpr double kOverlapVariants[3] = {0.3, 0.5, 0.7};

/// Reads the "sh-forge-motion/1" container: JSON with one row per frame of
/// [tx, ty, tz, J x 3 axis-angle values].
MotionSequence load_motion(std::istream& in);
void save_motion(const MotionSequence& seq, std::ostream& out);

/// Smooth procedural pose trajectory (slow sinusoid mixtures per joint axis),
/// deterministic in the seed.
MotionSequence generate_test_motion(uint64_t seed, int n_frames, int n_joints = 24);

/// Overlapping windows: stride = round_half_up(clip_len * (1 - overlap)),
/// starts at 0, stride, 2*stride, ... while start < n; trailing windows
/// shrink to the sequence end.
std::vector<Clip> chunk_clips(int n_frames, int clip_len, double overlap);

}  // namespace shforge
