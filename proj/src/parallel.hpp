// Copyright 2026 The seqdisc Authors
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

#ifndef SEQDISC_SRC_PARALLEL_HPP
#define SEQDISC_SRC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace seqdisc::detail {

/// Worker count: hardware concurrency, capped by SEQDISC_THREADS when set.
int worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Calls made from
/// inside a worker run serially, so nesting never oversubscribes.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 64);

}  // namespace seqdisc::detail

#endif  // SEQDISC_SRC_PARALLEL_HPP
