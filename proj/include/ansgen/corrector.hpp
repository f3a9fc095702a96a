#pragma once

// Grammar-correction post-processing. The identity corrector is the offline
// default; HttpCorrector talks to an external GEC service:
//
//   POST {endpoint}/correct   {"text": "..."}  ->  200 {"corrected": "...", "model": "..."}
//   GET  {endpoint}/healthz                    ->  200 "ok"
//
// 4xx responses are permanent failures; 5xx and transport errors (including
// timeouts) are retried with exponential backoff.

#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ansgen {

enum class OnGecError { Fail, Passthrough };

struct CorrectorConfig {
  std::string endpoint;
  int timeout_ms = 5000;
  int max_retries = 2;
  OnGecError on_error = OnGecError::Fail;
  int backoff_initial_ms = 100;

  /// Throws std::invalid_argument on a bad endpoint, timeout or retry count.
  void validate() const;
};

struct CorrectionResult {
  std::string original;
  std::string corrected;
  bool changed = false;
  double latency_ms = 0.0;
  std::string model;
  /// Set when a passthrough result stands in for a failed call.
  bool warning = false;
  std::string warning_message;
};

class CorrectionUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Corrector {
 public:
  virtual ~Corrector() = default;
  /// Safe to call concurrently from several threads.
  virtual CorrectionResult correct(std::string_view text) const = 0;
  /// Model name reported by the service, for report labels ("" for identity).
  virtual std::string model_label() const = 0;
};

class IdentityCorrector final : public Corrector {
 public:
  CorrectionResult correct(std::string_view text) const override;
  std::string model_label() const override { return {}; }
};

class HttpCorrector final : public Corrector {
 public:
  explicit HttpCorrector(CorrectorConfig config);

  CorrectionResult correct(std::string_view text) const override;
  std::string model_label() const override;

  /// GET /healthz answered 200 "ok".
  bool healthy() const;

  const CorrectorConfig& config() const { return config_; }

 private:
  CorrectorConfig config_;
  std::string host_;  // scheme://host:port
  std::string base_path_;
  mutable std::mutex model_mutex_;
  mutable std::string last_model_;
};

/// One-shot call through an HttpCorrector built from `config`.
CorrectionResult correct(std::string_view text, const CorrectorConfig& config);

}  // namespace ansgen
