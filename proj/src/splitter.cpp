#include "shforge/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "shforge/error.hpp"
#include "shforge/rng.hpp"

namespace shforge {

namespace {

constexpr uint64_t kSplitStream = 0x5117;  // fixed stream id for split draws
constexpr double kAssetHoldoutFraction = 0.2;

std::vector<std::string> seeded_order(std::vector<std::string> ids, Rng& rng) {
  std::sort(ids.begin(), ids.end());
  for (size_t i = ids.size(); i > 1; --i)
    std::swap(ids[i - 1], ids[rng.index(i)]);
  return ids;
}

// Seeded pick of ~20% of the ids, leaving at least one id on each side.
std::vector<int> hold_out(std::vector<int> ids, Rng& rng) {
  const int n = static_cast<int>(ids.size());
  if (n < 2) return {};
  int k = static_cast<int>(round_half_up(kAssetHoldoutFraction * n));
  k = std::clamp(k, 1, n - 1);
  for (size_t i = ids.size(); i > 1; --i)
    std::swap(ids[i - 1], ids[rng.index(i)]);
  ids.resize(static_cast<size_t>(k));
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

double split_test_fraction(const DatasetManifest& manifest,
                           const SplitAssignment& split) {
  int64_t total = 0, test = 0;
  for (const ClipRecord& r : manifest.clips) {
    total += r.frame_count;
    if (split.is_test_subject(r.subject_id)) test += r.frame_count;
  }
  return total == 0 ? 0.0 : static_cast<double>(test) / static_cast<double>(total);
}

SplitAssignment assign_split(const DatasetManifest& manifest,
                             const BankCatalog& banks,
                             const SplitOptions& options) {
  require(!manifest.clips.empty(), "cannot split an empty manifest");

  std::map<std::string, int64_t> frames_per_subject;
  std::map<std::string, std::set<std::string>> subjects_per_action;
  int64_t total_frames = 0;
  for (const ClipRecord& r : manifest.clips) {
    frames_per_subject[r.subject_id] += r.frame_count;
    total_frames += r.frame_count;
    if (!r.action.empty()) subjects_per_action[r.action].insert(r.subject_id);
  }
  require(frames_per_subject.size() >= 2, "cannot split by subject: need at least two subjects");
  require(total_frames > 0, "cannot split: no frames");

  Rng rng(seed_combine(options.seed, kSplitStream));
  const double lo = options.target_test_fraction - options.tolerance;
  const double hi = options.target_test_fraction + options.tolerance;

  std::vector<std::string> subject_ids;
  subject_ids.reserve(frames_per_subject.size());
  for (const auto& [id, _] : frames_per_subject) subject_ids.push_back(id);
  const std::vector<std::string> order = seeded_order(subject_ids, rng);

  std::set<std::string> test_subjects;
  int64_t test_frames = 0;
  auto fraction = [&] {
    return static_cast<double>(test_frames) / static_cast<double>(total_frames);
  };

  for (const std::string& id : order) {
    if (fraction() >= lo) break;
    const int64_t f = frames_per_subject[id];
    if (static_cast<double>(test_frames + f) / total_frames <= hi) {
      test_subjects.insert(id);
      test_frames += f;
    }
  }

  if (fraction() < lo) {
    // No compliant combination was reachable greedily; take the single
    // remaining subject that lands closest to the target.
    std::string best;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const std::string& id : order) {
      if (test_subjects.count(id)) continue;
      const double gap = std::abs(
          static_cast<double>(test_frames + frames_per_subject[id]) / total_frames -
          options.target_test_fraction);
      if (gap < best_gap) {
        best_gap = gap;
        best = id;
      }
    }
    if (!best.empty() && test_subjects.size() + 1 < frames_per_subject.size()) {
      test_subjects.insert(best);
      test_frames += frames_per_subject[best];
    }
  }
  require(test_subjects.size() < frames_per_subject.size(),
          "cannot split by subject: test side would take every subject");
  if (test_subjects.empty()) {
    // Tiny rosters where every subject overshoots: take the smallest one.
    const auto smallest = std::min_element(
        frames_per_subject.begin(), frames_per_subject.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    test_subjects.insert(smallest->first);
    test_frames += smallest->second;
  }

  // Keep frequent actions represented on both sides.
  for (const auto& [action, subjects] : subjects_per_action) {
    std::set<std::string> sequences;
    for (const ClipRecord& r : manifest.clips)
      if (r.action == action) sequences.insert(r.subject_id + "/" + r.sequence_id);
    if (sequences.size() < 5) continue;

    const bool in_test = std::any_of(subjects.begin(), subjects.end(),
                                     [&](const std::string& s) {
                                       return test_subjects.count(s) > 0;
                                     });
    const bool in_train = std::any_of(subjects.begin(), subjects.end(),
                                      [&](const std::string& s) {
                                        return test_subjects.count(s) == 0;
                                      });
    if (!in_test) {
      // Move the smallest train subject with this action over.
      std::string pick;
      for (const std::string& s : subjects)
        if (!test_subjects.count(s) &&
            (pick.empty() || frames_per_subject[s] < frames_per_subject[pick]))
          pick = s;
      if (!pick.empty() && test_subjects.size() + 1 < frames_per_subject.size()) {
        test_subjects.insert(pick);
        test_frames += frames_per_subject[pick];
      }
    } else if (!in_train) {
      std::string pick;
      for (const std::string& s : subjects)
        if (test_subjects.count(s) &&
            (pick.empty() || frames_per_subject[s] < frames_per_subject[pick]))
          pick = s;
      if (!pick.empty() && test_subjects.size() > 1) {
        test_subjects.erase(pick);
        test_frames -= frames_per_subject[pick];
      }
    }
  }

  SplitAssignment split;
  for (const auto& [id, _] : frames_per_subject)
    split.subjects[id] = test_subjects.count(id) ? "test" : "train";

  // Held-out appearance assets, textures stratified per set.
  std::vector<int> caesar_ids, clothed_ids;
  for (int i = 0; i < static_cast<int>(banks.texture_sets.size()); ++i) {
    (banks.texture_sets[static_cast<size_t>(i)] == TextureSet::kCaesarLike
         ? caesar_ids
         : clothed_ids)
        .push_back(i);
  }
  split.test_texture_ids = hold_out(caesar_ids, rng);
  const std::vector<int> clothed_test = hold_out(clothed_ids, rng);
  split.test_texture_ids.insert(split.test_texture_ids.end(),
                                clothed_test.begin(), clothed_test.end());
  std::sort(split.test_texture_ids.begin(), split.test_texture_ids.end());

  std::vector<int> background_ids(static_cast<size_t>(banks.background_count));
  for (int i = 0; i < banks.background_count; ++i)
    background_ids[static_cast<size_t>(i)] = i;
  split.test_background_ids = hold_out(background_ids, rng);

  if (banks.shape_count > 0) {
    std::vector<int> shape_ids(static_cast<size_t>(banks.shape_count));
    for (int i = 0; i < banks.shape_count; ++i) shape_ids[static_cast<size_t>(i)] = i;
    split.test_shape_ids = hold_out(shape_ids, rng);
  }

  return split;
}

}  // namespace shforge
