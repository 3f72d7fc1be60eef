// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <new>

#include "streamenh/io/fusion.hpp"
#include "streamenh/io/randomize.hpp"
#include "streamenh/runtime/session.hpp"
#include "support.hpp"

namespace {
std::atomic<bool> g_counting{false};
std::atomic<long> g_allocations{0};
}  // namespace

void* operator new(std::size_t n) {
  if (g_counting.load(std::memory_order_relaxed)) g_allocations.fetch_add(1, std::memory_order_relaxed);
  if (void* p = std::malloc(n ? n : 1)) return p;
  throw std::bad_alloc();
}
void* operator new[](std::size_t n) { return operator new(n); }
void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }

using namespace streamenh;

namespace {

long steady_state_allocations(const ModelConfig& config, bool fused) {
  auto bundle = random_weights(config, 3);
  if (fused && config.norm == NormKind::kBatch) bundle = fuse_batchnorm(bundle);
  EnhancerSession session(std::make_shared<const Network>(bundle));
  const auto x = testing::noise(256, 4);
  std::vector<float> y(256);
  // Long enough to fill every cache, including the attention window.
  for (int t = 0; t < 40; ++t) session.process_frame(x, y);
  g_allocations = 0;
  g_counting = true;
  for (int t = 0; t < 50; ++t) session.process_frame(x, y);
  g_counting = false;
  return g_allocations.load();
}

}  // namespace

TEST_CASE("process_frame does not allocate once warm") {
  for (const auto& v : variant_names())
    for (bool fused : {false, true}) {
      CAPTURE(v);
      CAPTURE(fused);
      CHECK(steady_state_allocations(make_variant(preset_config("T"), v), fused) == 0);
    }
}

TEST_CASE("the counter sees allocations") {
  g_allocations = 0;
  g_counting = true;
  auto* p = new std::vector<float>(10);
  g_counting = false;
  delete p;
  CHECK(g_allocations.load() >= 1);
}
