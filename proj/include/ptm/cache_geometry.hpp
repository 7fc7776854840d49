#pragma once

#include <stdexcept>
#include <string>

namespace ptm {

// Set-associative L1 shape. The default matches a first-generation Xeon Phi
// L1 data cache: 32 KiB, 8 ways, 64-byte lines, hence 64 sets.
struct CacheGeometry {
    long long capacity_bytes = 32 * 1024;
    long long line_bytes = 64;
    int ways = 8;

    long long num_sets() const { return capacity_bytes / (line_bytes * ways); }

    void validate() const {
        if (capacity_bytes <= 0 || line_bytes <= 0 || ways <= 0)
            throw std::invalid_argument("cache geometry fields must be positive");
        if (capacity_bytes % (line_bytes * ways) != 0)
            throw std::invalid_argument("line_bytes * ways must divide capacity_bytes");
    }
};

}  // namespace ptm
