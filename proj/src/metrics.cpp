#include "shforge/metrics.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "shforge/body_model.hpp"
#include "shforge/error.hpp"

namespace shforge {

namespace {

void check_same_shape(const ImageU8& pred, const ImageU8& gt) {
  require(pred.width() == gt.width() && pred.height() == gt.height() &&
              pred.channels() == 1 && gt.channels() == 1,
          "label map shape mismatch");
}

}  // namespace

void SegmAccumulator::add(const ImageU8& pred, const ImageU8& gt) {
  check_same_shape(pred, gt);
  const size_t n = gt.size();
  for (size_t i = 0; i < n; ++i) {
    const uint8_t p = pred.pixels()[i];
    const uint8_t g = gt.pixels()[i];
    require(p <= kPartCount && g <= kPartCount, "invalid label in label map");
    ++pred_count_[p];
    ++gt_count_[g];
    if (p == g) ++intersection_[p];
    if (g > 0 && p == g) ++foreground_correct_;
  }
  pixels_ += static_cast<int64_t>(n);
}

SegmMetrics SegmAccumulator::finalize() const {
  SegmMetrics m;
  m.pixels = pixels_;

  double iou_sum = 0.0;
  int iou_n = 0;
  double recall_sum = 0.0;
  int recall_n = 0;
  int64_t gt_foreground = 0;

  for (int p = 1; p <= kPartCount; ++p) {
    const int64_t uni = pred_count_[p] + gt_count_[p] - intersection_[p];
    if (uni > 0) {
      m.part_defined[p - 1] = true;
      m.per_part_iou[p - 1] =
          static_cast<double>(intersection_[p]) / static_cast<double>(uni);
      iou_sum += m.per_part_iou[p - 1];
      ++iou_n;
    }
    if (gt_count_[p] > 0) {
      recall_sum += static_cast<double>(intersection_[p]) /
                    static_cast<double>(gt_count_[p]);
      ++recall_n;
      gt_foreground += gt_count_[p];
    }
  }

  m.mean_iou = iou_n > 0 ? iou_sum / iou_n : 0.0;
  m.pixel_accuracy = recall_n > 0 ? recall_sum / recall_n : 0.0;
  m.global_accuracy =
      gt_foreground > 0
          ? static_cast<double>(foreground_correct_) / static_cast<double>(gt_foreground)
          : 0.0;
  return m;
}

SegmMetrics segm_metrics(const ImageU8& pred, const ImageU8& gt) {
  SegmAccumulator acc;
  acc.add(pred, gt);
  return acc.finalize();
}

void DepthAccumulator::add(const ImageU8& pred, const ImageU8& gt) {
  check_same_shape(pred, gt);
  const size_t n = gt.size();
  for (size_t i = 0; i < n; ++i) {
    const uint8_t g = gt.pixels()[i];
    if (g == 0) continue;
    add_value(pred.pixels()[i], g);
  }
}

void DepthAccumulator::add_value(int pred_label, int gt_label) {
  const double zp = pred_label * quant_.bin_width_m;
  const double zg = gt_label * quant_.bin_width_m;
  ++n_;
  sum_p_ += zp;
  sum_g_ += zg;
  sum_pp_ += zp * zp;
  sum_gg_ += zg * zg;
  sum_pg_ += zp * zg;
}

double DepthAccumulator::rmse_mm() const {
  require(n_ > 0, "empty foreground");
  const double mse = (sum_pp_ - 2.0 * sum_pg_ + sum_gg_) / static_cast<double>(n_);
  return std::sqrt(std::max(mse, 0.0)) * 1000.0;
}

double DepthAccumulator::st_rmse_mm() const {
  require(n_ > 0, "empty foreground");
  const double n = static_cast<double>(n_);
  const double mean_p = sum_p_ / n;
  const double mean_g = sum_g_ / n;
  const double var_p = sum_pp_ / n - mean_p * mean_p;
  const double cov = sum_pg_ / n - mean_p * mean_g;

  double a = 0.0;
  if (var_p > 1e-15) a = cov / var_p;
  const double b = mean_g - a * mean_p;

  const double mse = a * a * (sum_pp_ / n) + b * b + sum_gg_ / n +
                     2.0 * a * b * mean_p - 2.0 * a * (sum_pg_ / n) -
                     2.0 * b * mean_g;
  return std::sqrt(std::max(mse, 0.0)) * 1000.0;
}

double depth_rmse(const ImageU8& pred, const ImageU8& gt,
                  const DepthQuantization& q) {
  DepthAccumulator acc(q);
  acc.add(pred, gt);
  return acc.rmse_mm();
}

double st_rmse(const ImageU8& pred, const ImageU8& gt, const DepthQuantization& q) {
  DepthAccumulator acc(q);
  acc.add(pred, gt);
  require(acc.count() > 0, "empty foreground");
  require(acc.count() >= 2, "need at least two foreground pixels");
  return acc.st_rmse_mm();
}

std::pair<double, double> pose_rmse(const ImageU8& pred, const ImageU8& gt,
                                    const Points2& joints2d,
                                    const DepthQuantization& q) {
  check_same_shape(pred, gt);
  DepthAccumulator acc(q);
  for (Eigen::Index j = 0; j < joints2d.rows(); ++j) {
    const int x = static_cast<int>(round_half_up(joints2d(j, 0)));
    const int y = static_cast<int>(round_half_up(joints2d(j, 1)));
    if (x < 0 || x >= gt.width() || y < 0 || y >= gt.height()) continue;
    const uint8_t g = gt.at(x, y);
    if (g == 0) continue;
    acc.add_value(pred.at(x, y), g);
  }
  require(acc.count() > 0, "no usable joints");
  return {acc.rmse_mm(), acc.st_rmse_mm()};
}

std::string metrics_report_json(const MetricsReport& report) {
  nlohmann::json j;
  nlohmann::json parts = nlohmann::json::object();
  for (int p = 1; p <= kPartCount; ++p) {
    if (report.segm.part_defined[p - 1])
      parts[part_name(p)] = report.segm.per_part_iou[p - 1];
    else
      parts[part_name(p)] = nullptr;
  }
  j["per_part_iou"] = std::move(parts);
  j["mean_iou"] = report.segm.mean_iou;
  j["pixel_accuracy"] = report.segm.pixel_accuracy;
  j["global_accuracy"] = report.segm.global_accuracy;
  j["segm_pixels"] = report.segm.pixels;

  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j["rmse_mm"] = opt(report.rmse_mm);
  j["st_rmse_mm"] = opt(report.st_rmse_mm);
  j["pose_rmse_mm"] = opt(report.pose_rmse_mm);
  j["st_pose_rmse_mm"] = opt(report.st_pose_rmse_mm);
  j["depth_pixels"] = report.depth_pixels;
  j["joint_pixels"] = report.joint_pixels;
  j["frames"] = report.frames;
  return j.dump(2) + "\n";
}

std::string metrics_report_table(const MetricsReport& report) {
  std::ostringstream out;
  char buf[128];
  out << "part               IOU\n";
  for (int p = 1; p <= kPartCount; ++p) {
    if (report.segm.part_defined[p - 1]) {
      std::snprintf(buf, sizeof(buf), "%-16s %6.4f\n", part_name(p),
                    report.segm.per_part_iou[p - 1]);
    } else {
      std::snprintf(buf, sizeof(buf), "%-16s      -\n", part_name(p));
    }
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "%-16s %6.4f\n", "mean IOU", report.segm.mean_iou);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-16s %6.4f\n", "pixel accuracy",
                report.segm.pixel_accuracy);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-16s %6.4f\n", "global accuracy",
                report.segm.global_accuracy);
  out << buf;

  auto err_row = [&](const char* name, const std::optional<double>& v) {
    if (v)
      std::snprintf(buf, sizeof(buf), "%-16s %8.2f mm\n", name, *v);
    else
      std::snprintf(buf, sizeof(buf), "%-16s        - \n", name);
    out << buf;
  };
  err_row("RMSE", report.rmse_mm);
  err_row("st-RMSE", report.st_rmse_mm);
  err_row("PoseRMSE", report.pose_rmse_mm);
  err_row("st-PoseRMSE", report.st_pose_rmse_mm);
  return out.str();
}

}  // namespace shforge
