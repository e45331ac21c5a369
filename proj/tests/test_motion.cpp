#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "shforge/motion.hpp"

using namespace shforge;
using namespace shforge::testing;

namespace {

std::string sample_motion_json() {
  return R"({
    "version": "sh-forge-motion/1",
    "subject_id": "s01",
    "sequence_id": "walk01",
    "fps": 30.0,
    "frames": [
      [0,0,0, 0.1,0,0, 0,0.2,0],
      [0,0,0.1, 0.1,0,0, 0,0.2,0],
      [0,0,0.2, 0.2,0,0, 0,0.1,0]
    ]
  })";
}

}  // namespace

TEST_CASE("load_motion reads the sample fixture") {
  std::stringstream in(sample_motion_json());
  const MotionSequence seq = load_motion(in);
  CHECK(seq.frame_count() == 3);
  CHECK(seq.joint_count() == 2);
  CHECK(seq.subject_id == "s01");
  CHECK(seq.frames[2].root_translation.z() == doctest::Approx(0.2));
}

TEST_CASE("load_motion rejects defective inputs") {
  SUBCASE("NaN rotation") {
    // A literal NaN token is already invalid JSON and fails at parse time.
    std::stringstream in(R"({
      "version": "sh-forge-motion/1", "subject_id": "s", "sequence_id": "q",
      "fps": 30.0, "frames": [[0,0,0, NaN,0,0]]})");
    CHECK(error_contains([&] { load_motion(in); }, "malformed motion"));

    // NaNs injected programmatically are caught by sequence validation.
    MotionSequence seq = generate_test_motion(1, 2);
    seq.frames[1].joint_rotations[0].x() = std::nan("");
    CHECK(error_contains([&] { seq.validate(); }, "non-finite pose"));
  }
  SUBCASE("empty frame list") {
    std::stringstream in(R"({
      "version": "sh-forge-motion/1", "subject_id": "s", "sequence_id": "q",
      "fps": 30.0, "frames": []})");
    CHECK(error_contains([&] { load_motion(in); }, "empty sequence"));
  }
  SUBCASE("oversized rotation") {
    std::stringstream in(R"({
      "version": "sh-forge-motion/1", "subject_id": "s", "sequence_id": "q",
      "fps": 30.0, "frames": [[0,0,0, 7,0,0]]})");
    CHECK(error_contains([&] { load_motion(in); }, "magnitude exceeds 2*pi"));
  }
}

TEST_CASE("motion container roundtrip") {
  const MotionSequence seq = generate_test_motion(5, 17);
  std::stringstream buf;
  save_motion(seq, buf);
  const MotionSequence loaded = load_motion(buf);
  REQUIRE(loaded.frame_count() == seq.frame_count());
  for (int t = 0; t < seq.frame_count(); ++t) {
    CHECK(loaded.frames[t].root_translation == seq.frames[t].root_translation);
    for (int j = 0; j < seq.joint_count(); ++j)
      CHECK(loaded.frames[t].joint_rotations[j] == seq.frames[t].joint_rotations[j]);
  }
}

TEST_CASE("generate_test_motion is deterministic in the seed") {
  const MotionSequence a = generate_test_motion(7, 100);
  const MotionSequence b = generate_test_motion(7, 100);
  const MotionSequence c = generate_test_motion(8, 100);

  REQUIRE(a.frame_count() == 100);
  bool identical_ab = true, identical_ac = true;
  for (int t = 0; t < 100; ++t) {
    for (int j = 0; j < a.joint_count(); ++j) {
      identical_ab &= a.frames[t].joint_rotations[j] == b.frames[t].joint_rotations[j];
      identical_ac &= a.frames[t].joint_rotations[j] == c.frames[t].joint_rotations[j];
    }
  }
  CHECK(identical_ab);
  CHECK_FALSE(identical_ac);

  CHECK(generate_test_motion(3, 1).frame_count() == 1);
}

TEST_CASE("chunk_clips follows the stride rule") {
  SUBCASE("n=240, 30% overlap: stride 70 with a short trailing clip") {
    const auto clips = chunk_clips(240, 100, 0.3);
    REQUIRE(clips.size() == 4);
    const int starts[] = {0, 70, 140, 210};
    const int lengths[] = {100, 100, 100, 30};
    for (int i = 0; i < 4; ++i) {
      CHECK(clips[i].start_frame == starts[i]);
      CHECK(clips[i].length == lengths[i]);
      CHECK(clips[i].clip_index == i);
    }
  }

  SUBCASE("sequences shorter than the clip length give one short clip") {
    for (double overlap : kOverlapVariants) {
      const auto clips = chunk_clips(50, 100, overlap);
      REQUIRE(clips.size() == 1);
      CHECK(clips[0].start_frame == 0);
      CHECK(clips[0].length == 50);
    }
  }

  SUBCASE("strides for the three variants") {
    CHECK(chunk_clips(1000, 100, 0.3)[1].start_frame == 70);
    CHECK(chunk_clips(1000, 100, 0.5)[1].start_frame == 50);
    CHECK(chunk_clips(1000, 100, 0.7)[1].start_frame == 30);
  }

  SUBCASE("frame coverage and overlap bookkeeping") {
    for (int n : {50, 100, 173, 240, 1000}) {
      size_t previous_count = 0;
      for (double overlap : kOverlapVariants) {
        const auto clips = chunk_clips(n, 100, overlap);
        // Starts follow the arithmetic progression and cover [0, n).
        std::vector<bool> covered(static_cast<size_t>(n), false);
        const int stride = static_cast<int>(round_half_up(100 * (1.0 - overlap)));
        for (size_t i = 0; i < clips.size(); ++i) {
          CHECK(clips[i].start_frame == static_cast<int>(i) * stride);
          CHECK(clips[i].length >= 1);
          CHECK(clips[i].start_frame + clips[i].length <= n);
          for (int f = clips[i].start_frame; f < clips[i].start_frame + clips[i].length; ++f)
            covered[static_cast<size_t>(f)] = true;
        }
        CHECK(std::all_of(covered.begin(), covered.end(), [](bool c) { return c; }));
        // Clip count never decreases as overlap grows.
        CHECK(clips.size() >= previous_count);
        previous_count = clips.size();
      }
    }
  }

  SUBCASE("unsupported overlap is rejected") {
    CHECK(error_contains([&] { chunk_clips(100, 100, 0.4); }, "unsupported overlap"));
  }
}
