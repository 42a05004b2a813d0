// Copyright 2026 The ornn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ORNN_FLOPS_H_
#define ORNN_FLOPS_H_

#include <cstdint>

namespace ornn {

// Counts floating point operations issued by the hidden-to-hidden kernels.
// Convention: one multiply, add, subtract or divide is one flop; negations,
// copies and comparisons are free. Kernels bump the counter once per loop with
// the exact number of operations that loop executed.
//
// Pass a null pointer to a kernel to disable counting.
class FlopCounter {
 public:
  void Add(std::int64_t flops) { total_ += flops; }
  std::int64_t total() const { return total_; }
  void Reset() { total_ = 0; }

 private:
  std::int64_t total_ = 0;
};

inline void CountFlops(FlopCounter* counter, std::int64_t flops) {
  if (counter != nullptr) counter->Add(flops);
}

// Closed-form per-step counts for an m-reflection chain in dimension n
// (1 <= m <= n - 1).
constexpr std::int64_t ForwardFlops(std::int64_t n, std::int64_t m) {
  return (4 * n - m + 2) * m;
}
constexpr std::int64_t BackwardFlops(std::int64_t n, std::int64_t m) {
  return (7 * n - 2 * m + 3) * m;
}
constexpr std::int64_t RecomputeBackwardFlops(std::int64_t n, std::int64_t m) {
  return (11 * n - 3 * m + 5) * m;
}
// Dense transition baseline.
constexpr std::int64_t DenseForwardFlops(std::int64_t n) { return 2 * n * n - n; }
constexpr std::int64_t DenseBackwardFlops(std::int64_t n) {
  return 3 * n * n - n;
}

}  // namespace ornn

#endif  // ORNN_FLOPS_H_
