#include "teichlab/parallel.hpp"

namespace teichlab {

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_default_threads(unsigned n) { g_threads = n == 0 ? std::max(1u, std::thread::hardware_concurrency()) : n; }

unsigned default_threads() { return g_threads.load(); }

}  // namespace teichlab
