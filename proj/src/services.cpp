#include "humangen/services.hpp"

#include <json.hpp>

#include "humangen/imageio.hpp"
#include "humangen/rng.hpp"

namespace hgen {

namespace {

using nlohmann::json;

// Mock images: background stays black, foreground channels all >= 64 so a
// threshold of 32 separates them cleanly after PNG round-trips.
std::array<std::uint8_t, 3> mock_color(std::uint64_t seed) {
  std::uint64_t s = seed;
  const std::uint64_t h = splitmix64(s);
  return {static_cast<std::uint8_t>(64 + (h & 0xbf)),
          static_cast<std::uint8_t>(64 + ((h >> 8) & 0xbf)),
          static_cast<std::uint8_t>(64 + ((h >> 16) & 0xbf))};
}

constexpr std::uint8_t kMockForegroundThreshold = 32;

Mask condition_foreground(const GenerateRequest& req) {
  const DecodedImage img = decode_png(req.normal_png);
  if (img.width != req.width || img.height != req.height)
    throw ServiceError(400, "generate: request size does not match condition image");
  // Condition background is pure black; any nonzero byte marks foreground.
  return to_mask(img, 0);
}

std::vector<std::uint8_t> paint_silhouette(const Mask& fg, std::uint64_t seed) {
  const auto color = mock_color(seed);
  ImageRGB8 img(fg.width, fg.height);
  for (std::size_t i = 0; i < fg.data.size(); ++i) {
    if (!fg.data[i]) continue;
    img.data[i * 3] = color[0];
    img.data[i * 3 + 1] = color[1];
    img.data[i * 3 + 2] = color[2];
  }
  return encode_png(img);
}

}  // namespace

void validate(const GenerateRequest& req) {
  if (req.steps < 1) throw ServiceError(400, "generate: steps must be >= 1");
  if (req.width <= 0 || req.height <= 0) throw ServiceError(400, "generate: bad image size");
  if (req.control_scale < 0.0 || req.control_scale > 1.0)
    throw ServiceError(400, "generate: control_scale outside [0,1]");
  if (req.normal_png.empty()) throw ServiceError(400, "generate: missing condition image");
}

void validate(const SegmentRequest& req) {
  if (req.image_png.empty()) throw ServiceError(400, "segment: missing image");
  const DecodedImage img = decode_png(req.image_png);
  if (req.point_x < 0 || req.point_y < 0 || req.point_x >= img.width || req.point_y >= img.height)
    throw ServiceError(400, "segment: point outside image bounds");
}

std::vector<std::uint8_t> EchoMockGenerator::generate(const GenerateRequest& req) {
  validate(req);
  return paint_silhouette(condition_foreground(req), req.seed);
}

std::vector<std::uint8_t> MirrorMockGenerator::generate(const GenerateRequest& req) {
  validate(req);
  return paint_silhouette(flip_horizontal(condition_foreground(req)), req.seed);
}

Mask SilhouetteMockSegmenter::segment(const SegmentRequest& req) {
  validate(req);
  const DecodedImage img = decode_png(req.image_png);
  const Mask bright = to_mask(img, kMockForegroundThreshold);
  if (bright.at(req.point_x, req.point_y)) return bright;
  Mask complement(bright.width, bright.height);
  for (std::size_t i = 0; i < bright.data.size(); ++i) complement.data[i] = bright.data[i] ? 0 : 1;
  return complement;
}

std::unique_ptr<ImageGenClient> make_mock_generator(const std::string& name) {
  if (name == "echo") return std::make_unique<EchoMockGenerator>();
  if (name == "mirror") return std::make_unique<MirrorMockGenerator>();
  return nullptr;
}

std::unique_ptr<SegmentClient> make_mock_segmenter(const std::string& name) {
  if (name == "silhouette") return std::make_unique<SilhouetteMockSegmenter>();
  return nullptr;
}

// ---------------------------------------------------------------------------

namespace {
constexpr char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}
}  // namespace

std::string base64_encode(const std::uint8_t* bytes, std::size_t size) {
  std::string out;
  out.reserve((size + 2) / 3 * 4);
  for (std::size_t i = 0; i < size; i += 3) {
    const std::uint32_t b0 = bytes[i];
    const std::uint32_t b1 = i + 1 < size ? bytes[i + 1] : 0;
    const std::uint32_t b2 = i + 2 < size ? bytes[i + 2] : 0;
    const std::uint32_t triple = (b0 << 16) | (b1 << 8) | b2;
    out.push_back(kB64Alphabet[(triple >> 18) & 63]);
    out.push_back(kB64Alphabet[(triple >> 12) & 63]);
    out.push_back(i + 1 < size ? kB64Alphabet[(triple >> 6) & 63] : '=');
    out.push_back(i + 2 < size ? kB64Alphabet[triple & 63] : '=');
  }
  return out;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  return base64_encode(bytes.data(), bytes.size());
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw std::invalid_argument("base64: length not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=') {
        if (i + 4 != text.size() || k < 2) throw std::invalid_argument("base64: bad padding");
        vals[k] = 0;
        ++pad;
      } else {
        if (pad > 0) throw std::invalid_argument("base64: data after padding");
        vals[k] = b64_value(c);
        if (vals[k] < 0) throw std::invalid_argument("base64: invalid character");
      }
    }
    const std::uint32_t triple = (static_cast<std::uint32_t>(vals[0]) << 18) |
                                 (static_cast<std::uint32_t>(vals[1]) << 12) |
                                 (static_cast<std::uint32_t>(vals[2]) << 6) |
                                 static_cast<std::uint32_t>(vals[3]);
    out.push_back(static_cast<std::uint8_t>((triple >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((triple >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(triple & 0xff));
  }
  return out;
}

std::string encode_generate_request(const GenerateRequest& req) {
  json doc;
  doc["normal_png"] = base64_encode(req.normal_png);
  doc["prompt"] = req.prompt;
  doc["negative_prompt"] = req.negative_prompt;
  doc["steps"] = req.steps;
  doc["width"] = req.width;
  doc["height"] = req.height;
  doc["control_scale"] = req.control_scale;
  doc["seed"] = req.seed;
  return doc.dump();
}

GenerateRequest decode_generate_request(const std::string& body) {
  const json doc = json::parse(body);
  GenerateRequest req;
  req.normal_png = base64_decode(doc.at("normal_png").get<std::string>());
  req.prompt = doc.at("prompt").get<std::string>();
  req.negative_prompt = doc.at("negative_prompt").get<std::string>();
  req.steps = doc.at("steps").get<int>();
  req.width = doc.at("width").get<int>();
  req.height = doc.at("height").get<int>();
  req.control_scale = doc.at("control_scale").get<double>();
  req.seed = doc.at("seed").get<std::uint64_t>();
  return req;
}

std::string encode_generate_response(const std::vector<std::uint8_t>& image_png) {
  json doc;
  doc["image_png"] = base64_encode(image_png);
  return doc.dump();
}

std::vector<std::uint8_t> decode_generate_response(const std::string& body) {
  const json doc = json::parse(body);
  return base64_decode(doc.at("image_png").get<std::string>());
}

std::string encode_segment_request(const SegmentRequest& req) {
  json doc;
  doc["image_png"] = base64_encode(req.image_png);
  doc["point"] = json::array({req.point_x, req.point_y});
  return doc.dump();
}

SegmentRequest decode_segment_request(const std::string& body) {
  const json doc = json::parse(body);
  SegmentRequest req;
  req.image_png = base64_decode(doc.at("image_png").get<std::string>());
  req.point_x = doc.at("point").at(0).get<int>();
  req.point_y = doc.at("point").at(1).get<int>();
  return req;
}

std::string encode_segment_response(const Mask& mask) {
  json doc;
  doc["mask_png"] = base64_encode(encode_png(mask));
  return doc.dump();
}

Mask decode_segment_response(const std::string& body) {
  const json doc = json::parse(body);
  const auto bytes = base64_decode(doc.at("mask_png").get<std::string>());
  return to_mask(decode_png(bytes));
}

std::string encode_error(int code, const std::string& message) {
  json doc;
  doc["code"] = code;
  doc["message"] = message;
  return doc.dump();
}

}  // namespace hgen
