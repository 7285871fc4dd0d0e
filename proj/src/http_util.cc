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

#include "coda/http_util.h"

#include "coda/error.h"
#include "httplib.h"

namespace coda {
namespace {

// Splits "http://host:port/prefix" into the scheme-host-port part and an
// optional path prefix.
std::pair<std::string, std::string> SplitUrl(std::string_view url) {
  const size_t scheme = url.find("://");
  const size_t host_begin = scheme == std::string_view::npos ? 0 : scheme + 3;
  const size_t slash = url.find('/', host_begin);
  if (slash == std::string_view::npos) return {std::string(url), ""};
  std::string prefix(url.substr(slash));
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {std::string(url.substr(0, slash)), prefix};
}

}  // namespace

HttpReply PostJson(std::string_view base_url, std::string_view path,
                   const nlohmann::json& body, const HttpOptions& options) {
  const auto [origin, prefix] = SplitUrl(base_url);
  httplib::Client client(origin);
  if (!client.is_valid()) {
    throw Error(ErrorCode::kBackendUnavailable,
                "invalid backend url " + std::string(base_url));
  }
  client.set_connection_timeout(options.timeout);
  client.set_read_timeout(options.timeout);
  client.set_write_timeout(options.timeout);
  if (!options.bearer_token.empty()) {
    client.set_bearer_token_auth(options.bearer_token);
  }
  const std::string target = prefix + std::string(path);
  auto result = client.Post(target, body.dump(), "application/json");
  if (!result) {
    const httplib::Error err = result.error();
    const std::string what = httplib::to_string(err);
    if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout) {
      throw Error(ErrorCode::kTimeoutExceeded,
                  "POST " + origin + target + ": " + what);
    }
    throw Error(ErrorCode::kBackendUnavailable,
                "POST " + origin + target + ": " + what);
  }
  return {result->status, result->body};
}

std::string ErrorMessage(const HttpReply& reply) {
  const nlohmann::json parsed = nlohmann::json::parse(reply.body, nullptr, false);
  if (parsed.is_object() && parsed.contains("error") &&
      parsed["error"].is_string()) {
    return parsed["error"].get<std::string>();
  }
  return reply.body;
}

}  // namespace coda
