// Copyright 2026 The dbgas Authors. - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DBGAS_PARALLEL_HPP
#define DBGAS_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

#include "dbgas/errors.hpp"
#include "dbgas/rng.hpp"

namespace dbgas {

/// Result of a Monte Carlo run. std_error is the sample standard deviation over
/// sqrt(n_samples); min/max record the extreme per-sample values.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  double min_sample = 0.0;
  double max_sample = 0.0;
};

struct RunOptions {
  unsigned threads = 1;
  std::uint64_t chunk_size = 4096;
};

namespace detail {

struct ChunkStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void push(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }

  // Chan et al. pairwise update.
  void merge(const ChunkStats& o) {
    if (o.count == 0) return;
    const double n = static_cast<double>(count + o.count);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.count) / n;
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / n;
    count += o.count;
    lo = std::min(lo, o.lo);
    hi = std::max(hi, o.hi);
  }
};

}  // namespace detail

/// Averages `sample(stream)` over n draws. Samples are split into chunks of
/// opts.chunk_size; chunk c draws from Stream(seed, kind, c) and chunk
/// statistics are merged in chunk order, so the result is bit-identical for
/// any thread count.
template <class Sampler>
Estimate monte_carlo(std::uint64_t n, std::uint64_t seed, std::uint32_t kind, Sampler&& sample,
                     const RunOptions& opts = {}) {
  if (n == 0) throw ValidationError("monte_carlo: sample count must be positive");
  if (opts.chunk_size == 0) throw ValidationError("monte_carlo: chunk size must be positive");
  const std::uint64_t chunks = (n + opts.chunk_size - 1) / opts.chunk_size;
  if (chunks > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("monte_carlo: too many chunks for the stream counter");
  }
  std::vector<detail::ChunkStats> stats(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        Stream stream(seed, kind, static_cast<std::uint32_t>(c));
        const std::uint64_t begin = c * opts.chunk_size;
        const std::uint64_t end = std::min(n, begin + opts.chunk_size);
        for (std::uint64_t k = begin; k < end; ++k) stats[c].push(sample(stream));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(chunks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  detail::ChunkStats total;
  for (const auto& s : stats) total.merge(s);
  Estimate out;
  out.mean = total.mean;
  out.n_samples = total.count;
  out.seed = seed;
  out.std_error = total.count > 1
                    ? std::sqrt(total.m2 / static_cast<double>(total.count - 1) /
                                static_cast<double>(total.count))
                    : 0.0;
  out.min_sample = total.lo;
  out.max_sample = total.hi;
  return out;
}

/// Runs `task(index)` for index in [0, count) on up to `threads` workers.
/// Tasks must write only to their own output slot.
template <class Task>
void parallel_for(std::uint64_t count, unsigned threads, Task&& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(count, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace dbgas

#endif  // DBGAS_PARALLEL_HPP
