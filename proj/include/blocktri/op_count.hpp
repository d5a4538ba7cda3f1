#pragma once

#include <cstdint>

namespace blocktri::ops {

// Thread-local counter of real multiply-add operations, charged at algorithm
// level by the expansion paths (one complex * real pair counts as 2).
// Kernels do not self-report; callers charge the model count for the work
// they request, so scalar and SIMD backends report identically.
std::uint64_t count();
void reset();
void add(std::uint64_t n);

// Resets on construction, reads on demand. For scoped measurements in tests
// and the CLI op-count report.
class Meter {
public:
    Meter() { reset(); }
    std::uint64_t read() const { return count(); }
};

}  // namespace blocktri::ops
