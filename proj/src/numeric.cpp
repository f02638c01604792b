#include "hz/numeric.hpp"

namespace hz {

namespace {
std::atomic<int> g_threads{1};
}

int concurrency() { return g_threads.load(); }

void set_concurrency(int threads) { g_threads.store(threads < 1 ? 1 : threads); }

}  // namespace hz
