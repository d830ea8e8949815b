// Copyright 2026 The covpol authors
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

#ifndef COVPOL_PARALLEL_HPP
#define COVPOL_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace covpol {

/// Maps `requested` (0 = auto) to an effective worker count for `jobs` jobs.
int resolve_thread_count(int requested, std::size_t jobs);

/// Runs fn(0..n-1) on a bounded worker pool. Jobs must be independent and
/// write only to their own output slots; completion order is unspecified but
/// results are deterministic when jobs are. Rethrows the first job exception
/// after all workers have joined.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn);

} // namespace covpol

#endif // COVPOL_PARALLEL_HPP
