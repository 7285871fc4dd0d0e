//
// Copyright 2026 The coda-augment Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef CODA_BACKEND_H_
#define CODA_BACKEND_H_

#include <chrono>
#include <memory>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coda/http_util.h"

namespace coda {

// Defaults are the decoding settings used for every augmentation request.
struct SamplingParams {
  double temperature = 0.5;
  double top_p = 1.0;
  int top_k = 50;
  int max_tokens = 256;
  std::optional<uint64_t> seed;

  // Throws kConfigError when out of range.
  void Validate() const;
};

// Room for the length window plus wrapper prose.
int DefaultMaxTokens(size_t upper_length_bound);

struct GenerationRequest {
  std::string prompt;
  SamplingParams params;
  std::string correlation_id;
  std::string source_id;
};

struct GenerationResponse {
  std::string text;
  std::string backend_id;
};

// Implementations are safe for concurrent Generate calls.
class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  virtual GenerationResponse Generate(const GenerationRequest& request) = 0;
  virtual std::string id() const = 0;
};

struct RetryPolicy {
  int max_retries = 2;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
};

// POST {base_url}/generate with {"prompt","temperature","top_p","top_k",
// "max_tokens","seed"}; expects {"text": ...}. 5xx, 429 and transport
// failures are retried with exponential backoff.
class HttpGenerationBackend : public GenerationBackend {
 public:
  HttpGenerationBackend(std::string base_url, RetryPolicy retry,
                        HttpOptions options);

  GenerationResponse Generate(const GenerationRequest& request) override;
  std::string id() const override { return "http:" + base_url_; }

 private:
  std::string base_url_;
  RetryPolicy retry_;
  HttpOptions options_;
};

// Deterministic stand-in that reads the rendered prompt. Augmentation
// instructions get a document holding the first alternative of every
// keyword group padded with filler to exactly the lower length bound.
// Summary prompts get the first ten words of the document back; concept
// prompts get their first phrase. Output is a pure function of
// (prompt, seed).
class MockBackend : public GenerationBackend {
 public:
  MockBackend() = default;
  // Drops each keyword group with this probability; 0 by default.
  explicit MockBackend(double keyword_drop_rate);

  GenerationResponse Generate(const GenerationRequest& request) override;
  std::string id() const override { return "mock"; }

  static std::string Respond(std::string_view prompt, uint64_t seed,
                             double keyword_drop_rate = 0.0);

 private:
  double keyword_drop_rate_ = 0.0;
};

struct TranscriptEntry {
  std::string correlation_id;
  std::string source_id;
  std::string prompt;
  SamplingParams params;
  std::string text;
  std::string backend_id;
  std::string error;
};

// Forwards to an inner backend and records every exchange, including
// failures (which are rethrown).
class RecordingBackend : public GenerationBackend {
 public:
  explicit RecordingBackend(GenerationBackend& inner) : inner_(inner) {}

  GenerationResponse Generate(const GenerationRequest& request) override;
  std::string id() const override { return inner_.id(); }

  // Entries sorted by correlation id.
  std::vector<TranscriptEntry> Entries() const;
  size_t request_count() const;

 private:
  GenerationBackend& inner_;
  mutable std::mutex mu_;
  std::vector<TranscriptEntry> entries_;
};

// Builds a backend from a url: "mock", "mock:drop=<rate>" or http(s)://.
std::unique_ptr<GenerationBackend> MakeGenerationBackend(
    std::string_view url, RetryPolicy retry, HttpOptions options);

}  // namespace coda

#endif  // CODA_BACKEND_H_
