// Copyright 2026 The Signet Authors
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

#include "httplib.h"
#include "signet/transport.h"

namespace signet {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl Split(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw TransportError("endpoint is not an absolute URL: " + url, false);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool IsRetriableStatus(int status) { return status == 429 || status >= 500; }

class HttpTransport : public Transport {
 public:
  std::string Post(const std::string& endpoint, const std::string& body,
                   std::chrono::milliseconds timeout) override {
    const SplitUrl url = Split(endpoint);
    httplib::Client client(url.origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto result = client.Post(url.path, body, "application/json");
    if (!result) {
      throw TransportError("POST " + endpoint + " failed: " +
                               httplib::to_string(result.error()),
                           /*retriable=*/true);
    }
    if (result->status < 200 || result->status >= 300) {
      throw TransportError(
          "POST " + endpoint + " returned HTTP " +
              std::to_string(result->status),
          IsRetriableStatus(result->status), result->status);
    }
    return result->body;
  }
};

}  // namespace

std::shared_ptr<Transport> MakeHttpTransport() {
  return std::make_shared<HttpTransport>();
}

}  // namespace signet
