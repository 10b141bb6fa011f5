#pragma once

#include <memory>
#include <string>

#include "humangen/prompting.hpp"
#include "humangen/services.hpp"

namespace hgen {

struct HttpOptions {
  int timeout_seconds = 30;
  int max_retries = 3;
  int retry_backoff_ms = 100;  // doubles per retry
};

/// POST /v1/generate with the JSON envelope; retries transport failures and
/// 5xx responses with exponential backoff, then throws ServiceError.
class HttpImageGenClient : public ImageGenClient {
 public:
  HttpImageGenClient(std::string host, int port, HttpOptions options = HttpOptions{});
  std::vector<std::uint8_t> generate(const GenerateRequest& req) override;

 private:
  std::string host_;
  int port_;
  HttpOptions options_;
};

/// POST /v1/segment.
class HttpSegmentClient : public SegmentClient {
 public:
  HttpSegmentClient(std::string host, int port, HttpOptions options = HttpOptions{});
  Mask segment(const SegmentRequest& req) override;

 private:
  std::string host_;
  int port_;
  HttpOptions options_;
};

/// POST /v1/environment with {"indoor": bool}; returns {"environment": "..."}.
class HttpTextClient : public TextGenClient {
 public:
  HttpTextClient(std::string host, int port, HttpOptions options = HttpOptions{});
  std::string environment(bool indoor) override;

 private:
  std::string host_;
  int port_;
  HttpOptions options_;
};

/// Serves an ImageGenClient/SegmentClient pair over the wire protocol.
/// Blocks until stop() is called from another thread.
class ServiceServer {
 public:
  ServiceServer(std::unique_ptr<ImageGenClient> generator,
                std::unique_ptr<SegmentClient> segmenter);
  ~ServiceServer();

  /// Binds to 127.0.0.1 on the given port (0 picks a free port) and starts
  /// serving on a background thread. Returns the bound port.
  int start(int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// "host:port" helper for config strings like "http:127.0.0.1:8080".
bool parse_host_port(const std::string& text, std::string& host, int& port);

}  // namespace hgen
