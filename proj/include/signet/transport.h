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

#ifndef SIGNET_TRANSPORT_H_
#define SIGNET_TRANSPORT_H_

#include <chrono>
#include <memory>
#include <string>

#include "signet/error.h"

namespace signet {

/// Failure of a single transport attempt. `retriable` marks conditions that
/// may succeed on a later attempt (connection failures, timeouts, 5xx, 429).
class TransportError : public Error {
 public:
  TransportError(const std::string& message, bool retriable, int status = 0)
      : Error(message), retriable_(retriable), status_(status) {}

  bool retriable() const { return retriable_; }
  /// HTTP status, or 0 when no response was received.
  int status() const { return status_; }

 private:
  bool retriable_;
  int status_;
};

/// Moves one JSON request body to an endpoint and returns the response body.
/// Implementations must be safe to call from several threads at once.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual std::string Post(const std::string& endpoint,
                           const std::string& body,
                           std::chrono::milliseconds timeout) = 0;
};

/// HTTP(S) POST with `Content-Type: application/json`.
std::shared_ptr<Transport> MakeHttpTransport();

}  // namespace signet

#endif  // SIGNET_TRANSPORT_H_
