#include "humangen/http_service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <thread>

namespace hgen {

namespace {

std::string post_with_retry(const std::string& host, int port, const HttpOptions& options,
                            const std::string& path, const std::string& body) {
  int backoff = options.retry_backoff_ms;
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt < std::max(1, options.max_retries); ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    httplib::Client client(host, port);
    client.set_connection_timeout(options.timeout_seconds, 0);
    client.set_read_timeout(options.timeout_seconds, 0);
    auto res = client.Post(path, body, "application/json");
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server error " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      // 4xx is not retryable; surface the error envelope.
      try {
        const auto doc = nlohmann::json::parse(res->body);
        throw ServiceError(doc.at("code").get<int>(), doc.at("message").get<std::string>());
      } catch (const nlohmann::json::exception&) {
        throw ServiceError(res->status, "request rejected with status " +
                                            std::to_string(res->status));
      }
    }
    return res->body;
  }
  throw ServiceError(503, last_error);
}

}  // namespace

HttpImageGenClient::HttpImageGenClient(std::string host, int port, HttpOptions options)
    : host_(std::move(host)), port_(port), options_(options) {}

std::vector<std::uint8_t> HttpImageGenClient::generate(const GenerateRequest& req) {
  validate(req);
  const std::string body =
      post_with_retry(host_, port_, options_, "/v1/generate", encode_generate_request(req));
  std::vector<std::uint8_t> image;
  try {
    image = decode_generate_response(body);
  } catch (const std::exception& e) {
    throw ServiceError(502, std::string("generate: malformed response: ") + e.what());
  }
  const DecodedImage decoded = decode_png(image);
  if (decoded.width != req.width || decoded.height != req.height)
    throw ServiceError(502, "generate: response image size mismatch");
  return image;
}

HttpSegmentClient::HttpSegmentClient(std::string host, int port, HttpOptions options)
    : host_(std::move(host)), port_(port), options_(options) {}

Mask HttpSegmentClient::segment(const SegmentRequest& req) {
  validate(req);
  const std::string body =
      post_with_retry(host_, port_, options_, "/v1/segment", encode_segment_request(req));
  try {
    return decode_segment_response(body);
  } catch (const std::exception& e) {
    throw ServiceError(502, std::string("segment: malformed response: ") + e.what());
  }
}

HttpTextClient::HttpTextClient(std::string host, int port, HttpOptions options)
    : host_(std::move(host)), port_(port), options_(options) {}

std::string HttpTextClient::environment(bool indoor) {
  nlohmann::json doc;
  doc["indoor"] = indoor;
  const std::string body =
      post_with_retry(host_, port_, options_, "/v1/environment", doc.dump());
  return nlohmann::json::parse(body).at("environment").get<std::string>();
}

struct ServiceServer::Impl {
  std::unique_ptr<ImageGenClient> generator;
  std::unique_ptr<SegmentClient> segmenter;
  httplib::Server server;
  std::thread thread;
};

ServiceServer::ServiceServer(std::unique_ptr<ImageGenClient> generator,
                             std::unique_ptr<SegmentClient> segmenter)
    : impl_(std::make_unique<Impl>()) {
  impl_->generator = std::move(generator);
  impl_->segmenter = std::move(segmenter);

  impl_->server.Post("/v1/generate", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const GenerateRequest request = decode_generate_request(req.body);
      res.set_content(encode_generate_response(impl_->generator->generate(request)),
                      "application/json");
    } catch (const ServiceError& e) {
      res.status = e.code() >= 400 && e.code() < 600 ? e.code() : 500;
      res.set_content(encode_error(e.code(), e.what()), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(encode_error(400, e.what()), "application/json");
    }
  });
  impl_->server.Post("/v1/segment", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const SegmentRequest request = decode_segment_request(req.body);
      res.set_content(encode_segment_response(impl_->segmenter->segment(request)),
                      "application/json");
    } catch (const ServiceError& e) {
      res.status = e.code() >= 400 && e.code() < 600 ? e.code() : 500;
      res.set_content(encode_error(e.code(), e.what()), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(encode_error(400, e.what()), "application/json");
    }
  });
}

ServiceServer::~ServiceServer() { stop(); }

int ServiceServer::start(int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port("127.0.0.1");
    if (bound <= 0) throw std::runtime_error("server: failed to bind");
  } else {
    if (!impl_->server.bind_to_port("127.0.0.1", port))
      throw std::runtime_error("server: failed to bind port " + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void ServiceServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
  if (impl_ && impl_->thread.joinable()) impl_->thread.join();
}

bool parse_host_port(const std::string& text, std::string& host, int& port) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon + 1 >= text.size()) return false;
  host = text.substr(0, colon);
  try {
    port = std::stoi(text.substr(colon + 1));
  } catch (const std::exception&) {
    return false;
  }
  return !host.empty() && port > 0 && port < 65536;
}

}  // namespace hgen
