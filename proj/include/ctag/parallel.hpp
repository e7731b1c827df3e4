// Copyright 2026 The corpus-tagger Authors.
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

#ifndef CTAG_PARALLEL_HPP_
#define CTAG_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ctag::parallel {

// Resolves a worker-count request; 0 means "use the hardware".
inline unsigned effective_workers(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(shard_index, begin, end) over contiguous index ranges, one
// shard per worker. Shard boundaries depend only on (n, workers), so
// per-shard results are reproducible; callers must merge them with an
// order-insensitive (commutative, associative) operation to stay
// independent of the worker count. The first exception thrown by any
// shard is rethrown after all threads joined.
template <typename Fn>
void for_shards(std::size_t n, unsigned workers, Fn&& fn) {
  workers = effective_workers(workers);
  if (workers > n) workers = n == 0 ? 1 : static_cast<unsigned>(n);

  if (workers <= 1) {
    fn(0u, std::size_t{0}, n);
    return;
  }

  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;

  std::size_t base = n / workers;
  std::size_t extra = n % workers;
  std::size_t begin = 0;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t len = base + (w < extra ? 1 : 0);
    std::size_t end = begin + len;
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
    begin = end;
  }
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ctag::parallel

#endif  // CTAG_PARALLEL_HPP_
