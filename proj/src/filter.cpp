#include "humangen/filter.hpp"

#include <stdexcept>

namespace hgen {

double iou(const Mask& a, const Mask& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("iou: mask dimension mismatch");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const bool fa = a.data[i] != 0, fb = b.data[i] != 0;
    inter += (fa && fb);
    uni += (fa || fb);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Mask erode(const Mask& mask, int radius) {
  if (radius <= 0) return mask;
  Mask out(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      bool keep = true;
      for (int dy = -radius; dy <= radius && keep; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= mask.height) {
          keep = false;
          break;
        }
        for (int dx = -radius; dx <= radius; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= mask.width || !mask.at(xx, yy)) {
            keep = false;
            break;
          }
        }
      }
      if (keep) out.set(x, y, 1);
    }
  }
  return out;
}

PixelCoord sample_foreground_point(const Mask& mask, Rng& rng, int erosion_radius) {
  if (mask.count() == 0) throw std::invalid_argument("point sample: empty mask");
  const Mask eroded = erode(mask, erosion_radius);
  const Mask& source = eroded.count() > 0 ? eroded : mask;

  std::vector<std::size_t> fg;
  fg.reserve(source.count());
  for (std::size_t i = 0; i < source.data.size(); ++i)
    if (source.data[i]) fg.push_back(i);
  const std::size_t pick = fg[rng.index(fg.size())];
  return PixelCoord{static_cast<int>(pick % mask.width), static_cast<int>(pick / mask.width)};
}

FilterVerdict filter_sample(const Mask& gt_mask, const std::vector<std::uint8_t>& image_png,
                            SegmentClient& segmenter, double threshold, Rng& rng,
                            int erosion_radius) {
  if (gt_mask.count() == 0) throw std::invalid_argument("filter: empty ground-truth mask");
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw std::invalid_argument("filter: threshold must be in (0,1]");

  FilterVerdict verdict;
  verdict.threshold = threshold;
  verdict.point_used = sample_foreground_point(gt_mask, rng, erosion_radius);
  try {
    SegmentRequest req;
    req.image_png = image_png;
    req.point_x = verdict.point_used.x;
    req.point_y = verdict.point_used.y;
    const Mask predicted = segmenter.segment(req);
    if (predicted.width != gt_mask.width || predicted.height != gt_mask.height)
      throw ServiceError(502, "filter: predicted mask size mismatch");
    verdict.iou = iou(gt_mask, predicted);
    verdict.kept = verdict.iou >= threshold;
  } catch (const std::exception& e) {
    verdict.iou = 0.0;
    verdict.kept = false;
    verdict.error = e.what();
  }
  return verdict;
}

}  // namespace hgen
