// Copyright 2026 The Phonetraits Authors
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

#ifndef PHONETRAITS_PARALLEL_H_
#define PHONETRAITS_PARALLEL_H_

#include <functional>

namespace phonetraits {

// Runs task(i) for i in [0, count) on up to `jobs` threads. Tasks must write
// only to their own slot; the first exception is rethrown after all workers
// stop.
void ParallelFor(int count, int jobs, const std::function<void(int)>& task);

}  // namespace phonetraits

#endif  // PHONETRAITS_PARALLEL_H_
