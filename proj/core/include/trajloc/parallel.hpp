// core/include/trajloc/parallel.hpp

// Copyright 2026  The trajloc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>

namespace trajloc {

// Worker count: TRAJLOC_THREADS env var if set, else hardware concurrency.
int worker_count();
void set_worker_count(int n);  // n >= 1; overrides the env default

// Runs fn(begin, end) over a contiguous partition of [0, n).  Callers must
// only write to disjoint outputs per index; every cross-index reduction in
// this codebase is kept inside a single range so results do not depend on
// the worker count.
void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace trajloc
