#pragma once

#include <optional>
#include <string>

#include "humangen/image.hpp"
#include "humangen/rng.hpp"
#include "humangen/services.hpp"

namespace hgen {

/// Intersection-over-union of two same-sized masks. Two empty masks agree
/// perfectly and score 1.
double iou(const Mask& a, const Mask& b);

/// Chebyshev (square window) erosion: a pixel survives when every pixel
/// within the radius is foreground.
Mask erode(const Mask& mask, int radius);

/// Uniform pick from the eroded foreground; falls back to the raw mask when
/// erosion leaves nothing (thin structures). Throws on an empty mask.
struct PixelCoord {
  int x = 0;
  int y = 0;
};
PixelCoord sample_foreground_point(const Mask& mask, Rng& rng, int erosion_radius = 2);

struct FilterVerdict {
  double iou = 0;
  bool kept = false;
  PixelCoord point_used;
  double threshold = 0.8;
  std::optional<std::string> error;
};

/// Label denoising for one sample: prompt the segmenter with a point from
/// the ground-truth silhouette and keep the sample when IoU >= threshold.
/// Service failures yield kept=false with the error recorded (fail-closed).
FilterVerdict filter_sample(const Mask& gt_mask, const std::vector<std::uint8_t>& image_png,
                            SegmentClient& segmenter, double threshold, Rng& rng,
                            int erosion_radius = 2);

}  // namespace hgen
