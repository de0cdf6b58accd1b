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

#ifndef SIGNET_RETRY_H_
#define SIGNET_RETRY_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>

namespace signet {

struct BackoffPolicy {
  std::chrono::milliseconds base{250};
  std::chrono::milliseconds cap{8000};
};

/// Upper bound of the delay before retry number `attempt` (0-based):
/// min(cap, base * 2^attempt). Non-decreasing in `attempt`.
std::chrono::milliseconds BackoffCeiling(const BackoffPolicy& policy,
                                         int attempt);

/// Exponential backoff with full jitter: each delay is drawn uniformly from
/// [0, BackoffCeiling(attempt)].
class FullJitterBackoff {
 public:
  FullJitterBackoff(BackoffPolicy policy, std::uint64_t seed)
      : policy_(policy), rng_(seed) {}

  std::chrono::milliseconds Delay(int attempt);

 private:
  BackoffPolicy policy_;
  std::mt19937_64 rng_;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Sleeps the calling thread.
Sleeper RealSleeper();

}  // namespace signet

#endif  // SIGNET_RETRY_H_
