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

#include "coda/backend.h"

#include <algorithm>
#include <cctype>
#include <thread>

#include <spdlog/spdlog.h>

#include "coda/error.h"
#include "coda/rng.h"
#include "coda/textkit.h"
#include "json.hpp"

namespace coda {
namespace {

constexpr std::string_view kSummaryPrefix =
    "Summarize the following document in one short and concise sentence: ";
constexpr std::string_view kConceptPrefix =
    "These phrases appear in documents labeled ";
constexpr std::string_view kKeywordsMarker = "the following keywords: ";
constexpr std::string_view kExclusionMarker = ", but should not have";

constexpr std::string_view kFiller[] = {
    "people",   "local",    "report",   "plan",     "service",  "market",
    "season",   "team",     "city",     "price",    "group",    "program",
    "record",   "policy",   "support",  "history",  "project",  "review",
    "access",   "result",   "change",   "growth",   "event",    "public",
    "recent",   "several",  "many",     "new",      "major",    "small",
    "early",    "final",    "common",   "general",  "special",  "annual",
    "made",     "found",    "showed",   "offered",  "helped",   "started",
    "noted",    "added",    "brought",  "reached",  "kept",     "moved",
    "today",    "later",    "again",    "often",    "quickly",  "nearly",
};

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string FirstWords(std::string_view text, size_t count) {
  std::string out;
  size_t taken = 0;
  size_t pos = 0;
  while (taken < count) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    if (!out.empty()) out += ' ';
    out.append(text.substr(pos, end - pos));
    pos = end;
    ++taken;
  }
  return out;
}

bool AtClauseEnd(std::string_view text, size_t pos) {
  if (text[pos] != '.') return false;
  if (pos + 1 == text.size() || text[pos + 1] == '\n') return true;
  if (text[pos + 1] != ' ') return false;
  size_t i = pos + 2;
  const size_t digits = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  return i > digits && i + 1 < text.size() && text[i] == '.' && text[i + 1] == ' ';
}

// Keyword groups of a rendered keywords clause, first alternative each.
std::vector<std::string> ParseKeywordGroups(std::string_view prompt) {
  std::vector<std::string> groups;
  const size_t start = prompt.find(kKeywordsMarker);
  if (start == std::string_view::npos) return groups;
  std::string current;
  bool in_quote = false;
  bool quoted_group = false;
  const auto finish = [&] {
    std::string group = current;
    current.clear();
    if (!quoted_group) {
      const size_t alt = group.find(" or ");
      if (alt != std::string::npos) group.resize(alt);
    }
    quoted_group = false;
    if (!group.empty()) groups.push_back(std::move(group));
  };
  for (size_t pos = start + kKeywordsMarker.size(); pos < prompt.size(); ++pos) {
    const char c = prompt[pos];
    if (c == '"') {
      in_quote = !in_quote;
      quoted_group = true;
      continue;
    }
    if (!in_quote) {
      if (StartsWith(prompt.substr(pos), kExclusionMarker)) break;
      if (prompt.substr(pos, 2) == ", ") {
        finish();
        ++pos;
        continue;
      }
      if (AtClauseEnd(prompt, pos)) break;
    }
    current += c;
  }
  finish();
  return groups;
}

std::optional<size_t> ParseLowerBound(std::string_view prompt) {
  const std::string_view marker = "length of ";
  const size_t at = prompt.find(marker);
  if (at == std::string_view::npos) return std::nullopt;
  size_t pos = at + marker.size();
  size_t value = 0;
  bool any = false;
  while (pos < prompt.size() && std::isdigit(static_cast<unsigned char>(prompt[pos]))) {
    value = value * 10 + static_cast<size_t>(prompt[pos] - '0');
    ++pos;
    any = true;
  }
  if (!any) return std::nullopt;
  return value;
}

bool IsTransientStatus(int status) { return status >= 500 || status == 429; }

}  // namespace

void SamplingParams::Validate() const {
  if (!(temperature >= 0.0)) {
    throw Error(ErrorCode::kConfigError, "temperature must be >= 0");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw Error(ErrorCode::kConfigError, "top_p must lie in (0, 1]");
  }
  if (top_k < 1) throw Error(ErrorCode::kConfigError, "top_k must be >= 1");
  if (max_tokens < 1) {
    throw Error(ErrorCode::kConfigError, "max_tokens must be >= 1");
  }
}

int DefaultMaxTokens(size_t upper_length_bound) {
  return static_cast<int>(2 * upper_length_bound + 32);
}

HttpGenerationBackend::HttpGenerationBackend(std::string base_url,
                                             RetryPolicy retry,
                                             HttpOptions options)
    : base_url_(std::move(base_url)),
      retry_(retry),
      options_(std::move(options)) {}

GenerationResponse HttpGenerationBackend::Generate(
    const GenerationRequest& request) {
  request.params.Validate();
  nlohmann::json body = {
      {"prompt", request.prompt},
      {"temperature", request.params.temperature},
      {"top_p", request.params.top_p},
      {"top_k", request.params.top_k},
      {"max_tokens", request.params.max_tokens},
      {"seed", nullptr},
  };
  if (request.params.seed) body["seed"] = *request.params.seed;

  auto backoff = retry_.initial_backoff;
  ErrorCode last_code = ErrorCode::kBackendUnavailable;
  std::string last_error;
  for (int attempt = 0; attempt <= retry_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(static_cast<long long>(
          static_cast<double>(backoff.count()) * retry_.multiplier));
    }
    spdlog::debug("generate source={} id={} attempt={}", request.source_id,
                  request.correlation_id, attempt);
    HttpReply reply;
    try {
      reply = PostJson(base_url_, "/generate", body, options_);
    } catch (const Error& e) {
      last_code = e.code();
      last_error = e.what();
      spdlog::warn("generate id={} failed: {}", request.correlation_id,
                   last_error);
      continue;
    }
    if (reply.status == 200) {
      const auto parsed = nlohmann::json::parse(reply.body, nullptr, false);
      if (!parsed.is_object() || !parsed.contains("text") ||
          !parsed["text"].is_string()) {
        throw Error(ErrorCode::kBackendUnavailable,
                    "generate response lacks a \"text\" string");
      }
      std::string text = parsed["text"].get<std::string>();
      if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::kEmptyReply,
                    "empty generation for " + request.correlation_id);
      }
      return {std::move(text), id()};
    }
    last_code = ErrorCode::kBackendUnavailable;
    last_error = "HTTP " + std::to_string(reply.status) + ": " +
                 ErrorMessage(reply);
    spdlog::warn("generate id={} failed: {}", request.correlation_id,
                 last_error);
    if (!IsTransientStatus(reply.status)) break;
  }
  throw Error(last_code, "generate " + request.correlation_id + " gave up: " +
                             last_error);
}

MockBackend::MockBackend(double keyword_drop_rate)
    : keyword_drop_rate_(keyword_drop_rate) {}

GenerationResponse MockBackend::Generate(const GenerationRequest& request) {
  request.params.Validate();
  return {Respond(request.prompt, request.params.seed.value_or(0),
                  keyword_drop_rate_),
          id()};
}

std::string MockBackend::Respond(std::string_view prompt, uint64_t seed,
                                 double keyword_drop_rate) {
  if (StartsWith(prompt, kSummaryPrefix)) {
    return FirstWords(prompt.substr(kSummaryPrefix.size()), 10);
  }
  if (StartsWith(prompt, kConceptPrefix)) {
    const size_t examples = prompt.find(". Example sentences:");
    const size_t colon = prompt.rfind(": ", examples);
    if (examples == std::string_view::npos || colon == std::string_view::npos) {
      return "";
    }
    std::string_view phrases = prompt.substr(colon + 2, examples - colon - 2);
    return std::string(phrases.substr(0, phrases.find(", ")));
  }

  Rng rng(DeriveSeed(seed, prompt));
  std::string text;
  for (const std::string& group : ParseKeywordGroups(prompt)) {
    if (keyword_drop_rate > 0.0 && UniformReal(rng) < keyword_drop_rate) {
      continue;
    }
    if (!text.empty()) text += ' ';
    text += group;
  }
  const size_t target = ParseLowerBound(prompt).value_or(1);
  size_t words = WordCount(text);
  while (words < target) {
    if (!text.empty()) text += ' ';
    text += kFiller[UniformIndex(rng, std::size(kFiller))];
    ++words;
  }
  text += '.';
  return text;
}

GenerationResponse RecordingBackend::Generate(const GenerationRequest& request) {
  TranscriptEntry entry{request.correlation_id, request.source_id,
                        request.prompt,         request.params,
                        "",                     inner_.id(),
                        ""};
  try {
    GenerationResponse response = inner_.Generate(request);
    entry.text = response.text;
    entry.backend_id = response.backend_id;
    std::lock_guard lock(mu_);
    entries_.push_back(std::move(entry));
    return response;
  } catch (const Error& e) {
    entry.error = e.what();
    std::lock_guard lock(mu_);
    entries_.push_back(std::move(entry));
    throw;
  }
}

std::vector<TranscriptEntry> RecordingBackend::Entries() const {
  std::vector<TranscriptEntry> out;
  {
    std::lock_guard lock(mu_);
    out = entries_;
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.correlation_id < b.correlation_id;
  });
  return out;
}

size_t RecordingBackend::request_count() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::unique_ptr<GenerationBackend> MakeGenerationBackend(
    std::string_view url, RetryPolicy retry, HttpOptions options) {
  if (url == "mock") return std::make_unique<MockBackend>();
  if (StartsWith(url, "mock:drop=")) {
    const std::string rate(url.substr(10));
    char* end = nullptr;
    const double value = std::strtod(rate.c_str(), &end);
    if (end == rate.c_str() || *end != '\0' || value < 0.0 || value > 1.0) {
      throw Error(ErrorCode::kConfigError, "bad mock drop rate '" + rate + "'");
    }
    return std::make_unique<MockBackend>(value);
  }
  if (StartsWith(url, "http://") || StartsWith(url, "https://")) {
    return std::make_unique<HttpGenerationBackend>(std::string(url), retry,
                                                   std::move(options));
  }
  throw Error(ErrorCode::kConfigError,
              "backend url must be mock or http(s)://, got '" +
                  std::string(url) + "'");
}

}  // namespace coda
