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

#ifndef SIGNET_BATCH_H_
#define SIGNET_BATCH_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace signet {

enum class FailurePolicy { kFailFast, kSkip };

/// A per-item failure recorded under FailurePolicy::kSkip.
struct ItemFailure {
  std::string item_id;
  std::string stage;
  std::string message;
};

/// Runs `fn(i)` for every i in [0, n) on up to `workers` threads. Returns one
/// slot per index holding the exception that index threw, or null. Callers
/// assemble results by index, so output order never depends on scheduling.
template <typename Fn>
std::vector<std::exception_ptr> ParallelFor(std::size_t n, int workers,
                                            Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    return errors;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  return errors;
}

/// Message of an exception_ptr, for run reports.
inline std::string DescribeException(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

}  // namespace signet

#endif  // SIGNET_BATCH_H_
