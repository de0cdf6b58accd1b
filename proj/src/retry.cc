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

#include "signet/retry.h"

#include <algorithm>
#include <cassert>
#include <thread>

namespace signet {

std::chrono::milliseconds BackoffCeiling(const BackoffPolicy& policy,
                                         int attempt) {
  assert(attempt >= 0);
  const std::int64_t cap = policy.cap.count();
  std::int64_t delay = policy.base.count();
  for (int i = 0; i < attempt && delay < cap; ++i) delay *= 2;
  return std::chrono::milliseconds(std::min(delay, cap));
}

std::chrono::milliseconds FullJitterBackoff::Delay(int attempt) {
  const auto ceiling = BackoffCeiling(policy_, attempt);
  std::uniform_int_distribution<std::int64_t> dist(0, ceiling.count());
  return std::chrono::milliseconds(dist(rng_));
}

Sleeper RealSleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

}  // namespace signet
