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

#ifndef CODA_HTTP_UTIL_H_
#define CODA_HTTP_UTIL_H_

#include <chrono>
#include <string>
#include <string_view>

#include "json.hpp"

namespace coda {

struct HttpOptions {
  std::chrono::milliseconds timeout{60000};
  std::string bearer_token;  // sent as "Authorization: Bearer ..." if set
};

struct HttpReply {
  int status = 0;
  std::string body;
};

// POSTs a JSON body to base_url + path. Transport failures throw
// kBackendUnavailable, timeouts kTimeoutExceeded; any HTTP status is
// returned to the caller.
HttpReply PostJson(std::string_view base_url, std::string_view path,
                   const nlohmann::json& body, const HttpOptions& options);

// Message from an {"error": ...} body, or the raw body when not JSON.
std::string ErrorMessage(const HttpReply& reply);

}  // namespace coda

#endif  // CODA_HTTP_UTIL_H_
