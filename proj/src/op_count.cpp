#include "blocktri/op_count.hpp"

namespace blocktri::ops {

namespace {
thread_local std::uint64_t g_count = 0;
}

std::uint64_t count() { return g_count; }
void reset() { g_count = 0; }
void add(std::uint64_t n) { g_count += n; }

}  // namespace blocktri::ops
