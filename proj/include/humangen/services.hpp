#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "humangen/image.hpp"

namespace hgen {

/// Error surfaced by a service client; the pipeline converts these into
/// per-sample failures rather than aborting the batch.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_ = 0;
};

struct GenerateRequest {
  std::vector<std::uint8_t> normal_png;
  std::string prompt;
  std::string negative_prompt;
  int steps = 40;
  int width = 0;
  int height = 0;
  double control_scale = 1.0;
  std::uint64_t seed = 0;
};

struct SegmentRequest {
  std::vector<std::uint8_t> image_png;
  int point_x = 0;
  int point_y = 0;
};

/// Validates request invariants (steps >= 1, dimensions match the condition
/// image, control_scale in [0,1], point in bounds). Throws ServiceError with
/// code 400.
void validate(const GenerateRequest& req);
void validate(const SegmentRequest& req);

class ImageGenClient {
 public:
  virtual ~ImageGenClient() = default;
  /// Returns PNG bytes of an RGB image of the requested size.
  virtual std::vector<std::uint8_t> generate(const GenerateRequest& req) = 0;
};

class SegmentClient {
 public:
  virtual ~SegmentClient() = default;
  virtual Mask segment(const SegmentRequest& req) = 0;
};

// ---------------------------------------------------------------------------
// Deterministic in-process mocks. Mock images paint the silhouette in a
// seed-derived bright color on a black background, so the segmenter mock can
// recover the silhouette from pixel intensity alone.

/// Silhouette equals the condition foreground exactly.
class EchoMockGenerator : public ImageGenClient {
 public:
  std::vector<std::uint8_t> generate(const GenerateRequest& req) override;
};

/// Silhouette is the horizontally mirrored condition foreground (simulates
/// generations that flip the subject left-right).
class MirrorMockGenerator : public ImageGenClient {
 public:
  std::vector<std::uint8_t> generate(const GenerateRequest& req) override;
};

/// Returns the bright-pixel component when the prompt point is bright, else
/// the complement.
class SilhouetteMockSegmenter : public SegmentClient {
 public:
  Mask segment(const SegmentRequest& req) override;
};

std::unique_ptr<ImageGenClient> make_mock_generator(const std::string& name);
std::unique_ptr<SegmentClient> make_mock_segmenter(const std::string& name);

// ---------------------------------------------------------------------------
// JSON wire protocol (HTTP bodies). PNG payloads travel base64-encoded.

std::string base64_encode(const std::uint8_t* bytes, std::size_t size);
std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

std::string encode_generate_request(const GenerateRequest& req);
GenerateRequest decode_generate_request(const std::string& body);
std::string encode_generate_response(const std::vector<std::uint8_t>& image_png);
std::vector<std::uint8_t> decode_generate_response(const std::string& body);

std::string encode_segment_request(const SegmentRequest& req);
SegmentRequest decode_segment_request(const std::string& body);
std::string encode_segment_response(const Mask& mask);
Mask decode_segment_response(const std::string& body);

std::string encode_error(int code, const std::string& message);

}  // namespace hgen
