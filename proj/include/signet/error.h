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

#ifndef SIGNET_ERROR_H_
#define SIGNET_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace signet {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A record in an input file is malformed. `line` is 1-based; 0 when the
/// error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": field '" + field +
                             "': " + message
                       : "field '" + field + "': " + message),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Caller passed an argument outside an operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration. `field` names the offending key.
class UsageError : public Error {
 public:
  UsageError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A remote model call failed after exhausting retries, or failed with a
/// non-retriable status.
class BackendError : public Error {
 public:
  BackendError(std::string capability, const std::string& message)
      : Error(capability + " backend: " + message),
        capability_(std::move(capability)) {}

  const std::string& capability() const { return capability_; }

 private:
  std::string capability_;
};

/// Replay mode was asked for a request that has no recorded response.
class DeterminismError : public Error {
 public:
  DeterminismError(std::string digest, const std::string& message)
      : Error(message + " (digest " + digest + ")"),
        digest_(std::move(digest)) {}

  const std::string& digest() const { return digest_; }

 private:
  std::string digest_;
};

/// A backend answered with a body that violates the wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Wraps a failure raised while processing one pipeline item.
class PipelineError : public Error {
 public:
  PipelineError(std::string item_id, const std::string& message)
      : Error("item " + item_id + ": " + message),
        item_id_(std::move(item_id)) {}

  const std::string& item_id() const { return item_id_; }

 private:
  std::string item_id_;
};

}  // namespace signet

#endif  // SIGNET_ERROR_H_
