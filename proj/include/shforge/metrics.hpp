#pragma once

#include <array>
#include <optional>
#include <string>

#include "shforge/ground_truth.hpp"
#include "shforge/image.hpp"
#include "shforge/types.hpp"

namespace shforge {

struct SegmMetrics {
  std::array<double, kPartCount> per_part_iou{};
  std::array<bool, kPartCount> part_defined{};  // present in pred or gt
  double mean_iou = 0.0;
  double pixel_accuracy = 0.0;   // mean per-class recall over classes in gt
  double global_accuracy = 0.0;  // correct / total over gt foreground pixels
  int64_t pixels = 0;
};

/// Streaming confusion counts so directory-level evaluation pools pixels
/// across frames.
class SegmAccumulator {
 public:
  void add(const ImageU8& pred, const ImageU8& gt);
  SegmMetrics finalize() const;

 private:
  std::array<int64_t, kPartCount + 1> intersection_{};
  std::array<int64_t, kPartCount + 1> pred_count_{};
  std::array<int64_t, kPartCount + 1> gt_count_{};
  int64_t foreground_correct_ = 0;
  int64_t pixels_ = 0;
};

/// Depth-label error moments over gt-foreground pixels. Labels convert to
/// depth as label * bin_width; a background prediction on a foreground pixel
/// enters as label 0.
class DepthAccumulator {
 public:
  explicit DepthAccumulator(const DepthQuantization& q = {}) : quant_(q) {}

  void add(const ImageU8& pred, const ImageU8& gt);
  void add_value(int pred_label, int gt_label);

  int64_t count() const { return n_; }
  /// RMSE in millimeters. Throws "empty foreground" when nothing was added.
  double rmse_mm() const;
  /// RMSE after the best depth scale/translation fit, millimeters.
  double st_rmse_mm() const;

 private:
  DepthQuantization quant_;
  int64_t n_ = 0;
  double sum_p_ = 0, sum_g_ = 0, sum_pp_ = 0, sum_gg_ = 0, sum_pg_ = 0;
};

SegmMetrics segm_metrics(const ImageU8& pred, const ImageU8& gt);
double depth_rmse(const ImageU8& pred, const ImageU8& gt,
                  const DepthQuantization& q = {});
double st_rmse(const ImageU8& pred, const ImageU8& gt,
               const DepthQuantization& q = {});

/// Depth errors restricted to the pixels under the (round-half-up) 2D joint
/// locations; joints outside the image or on gt background are skipped.
/// Returns (rmse, st_rmse) in millimeters; throws "no usable joints" when
/// every joint is skipped.
std::pair<double, double> pose_rmse(const ImageU8& pred, const ImageU8& gt,
                                    const Points2& joints2d,
                                    const DepthQuantization& q = {});

struct MetricsReport {
  SegmMetrics segm;
  std::optional<double> rmse_mm;
  std::optional<double> st_rmse_mm;
  std::optional<double> pose_rmse_mm;
  std::optional<double> st_pose_rmse_mm;
  int64_t depth_pixels = 0;
  int64_t joint_pixels = 0;
  int frames = 0;
};

std::string metrics_report_json(const MetricsReport& report);
std::string metrics_report_table(const MetricsReport& report);

}  // namespace shforge
