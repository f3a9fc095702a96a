#include "ansgen/corrector.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace ansgen {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Endpoint {
  std::string host;  // scheme://host[:port]
  std::string base_path;
};

Endpoint split_endpoint(std::string_view url) {
  constexpr std::string_view scheme = "http://";
  if (url.substr(0, scheme.size()) != scheme) {
    throw std::invalid_argument("corrector endpoint must be an http:// URL: " + std::string(url));
  }
  const std::size_t slash = url.find('/', scheme.size());
  Endpoint ep;
  ep.host = std::string(url.substr(0, slash));
  if (slash != std::string_view::npos) ep.base_path = std::string(url.substr(slash));
  while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();
  if (ep.host.size() == scheme.size()) throw std::invalid_argument("corrector endpoint has no host");
  return ep;
}

}  // namespace

void CorrectorConfig::validate() const {
  if (endpoint.empty()) throw std::invalid_argument("corrector endpoint is empty");
  split_endpoint(endpoint);
  if (timeout_ms <= 0) throw std::invalid_argument("timeout_ms must be positive");
  if (max_retries < 0 || max_retries > 5) throw std::invalid_argument("max_retries must be within [0, 5]");
  if (backoff_initial_ms < 0) throw std::invalid_argument("backoff_initial_ms must be non-negative");
}

CorrectionResult IdentityCorrector::correct(std::string_view text) const {
  if (text.empty()) throw std::invalid_argument("correct: empty text");
  CorrectionResult r;
  r.original = std::string(text);
  r.corrected = r.original;
  return r;
}

HttpCorrector::HttpCorrector(CorrectorConfig config) : config_(std::move(config)) {
  config_.validate();
  auto ep = split_endpoint(config_.endpoint);
  host_ = std::move(ep.host);
  base_path_ = std::move(ep.base_path);
}

std::string HttpCorrector::model_label() const {
  std::lock_guard lock(model_mutex_);
  return last_model_;
}

bool HttpCorrector::healthy() const {
  httplib::Client client(host_);
  client.set_connection_timeout(std::chrono::milliseconds(config_.timeout_ms));
  client.set_read_timeout(std::chrono::milliseconds(config_.timeout_ms));
  auto res = client.Get(base_path_ + "/healthz");
  return res && res->status == 200 && res->body == "ok";
}

CorrectionResult HttpCorrector::correct(std::string_view text) const {
  if (text.empty()) throw std::invalid_argument("correct: empty text");
  const auto start = Clock::now();
  const std::string body = nlohmann::json{{"text", text}}.dump();
  const auto timeout = std::chrono::milliseconds(config_.timeout_ms);

  // One client per call keeps concurrent callers independent.
  httplib::Client client(host_);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  std::string failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(config_.backoff_initial_ms) * (1 << (attempt - 1)));
    }
    auto res = client.Post(base_path_ + "/correct", body, "application/json");
    if (!res) {
      failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      failure = "service returned " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      failure = "service rejected request with " + std::to_string(res->status);
      break;
    }
    auto reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.is_object() || !reply.contains("corrected") ||
        !reply["corrected"].is_string()) {
      failure = "malformed service response";
      break;
    }
    CorrectionResult r;
    r.original = std::string(text);
    r.corrected = reply["corrected"].get<std::string>();
    if (r.corrected.empty()) {
      failure = "service returned an empty correction";
      break;
    }
    if (reply.contains("model") && reply["model"].is_string()) r.model = reply["model"].get<std::string>();
    r.changed = r.original != r.corrected;
    r.latency_ms = elapsed_ms(start);
    if (!r.model.empty()) {
      std::lock_guard lock(model_mutex_);
      last_model_ = r.model;
    }
    return r;
  }

  if (config_.on_error == OnGecError::Fail) throw CorrectionUnavailable("grammar correction failed: " + failure);
  CorrectionResult r;
  r.original = std::string(text);
  r.corrected = r.original;
  r.latency_ms = elapsed_ms(start);
  r.warning = true;
  r.warning_message = failure;
  return r;
}

CorrectionResult correct(std::string_view text, const CorrectorConfig& config) {
  return HttpCorrector(config).correct(text);
}

}  // namespace ansgen
