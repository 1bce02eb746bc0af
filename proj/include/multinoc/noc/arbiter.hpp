// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bitset>
#include <optional>

#include "multinoc/noc/types.hpp"

namespace multinoc::noc {

// Request set for the round-robin arbiter, indexed by Port.
class PortSet {
public:
    void set(Port p) { bits_.set(static_cast<std::size_t>(p)); }
    void clear(Port p) { bits_.reset(static_cast<std::size_t>(p)); }
    bool test(Port p) const { return bits_.test(static_cast<std::size_t>(p)); }
    bool any() const { return bits_.any(); }
    std::size_t count() const { return bits_.count(); }

private:
    std::bitset<kPortCount> bits_;
};

// Round-robin arbitration over the cyclic port order
// east -> west -> north -> south -> local -> east.
// Returns the first requesting port at or after `pointer`, or nothing when
// no port requests. The caller advances its pointer to the successor of the
// grantee, which makes repeated grants rotate fairly under full contention.
inline std::optional<Port> arbitrate(const PortSet& requests, Port pointer) {
    if (!requests.any()) return std::nullopt;
    auto idx = static_cast<std::size_t>(pointer);
    for (int i = 0; i < kPortCount; ++i) {
        Port p = kPortOrder[(idx + i) % kPortCount];
        if (requests.test(p)) return p;
    }
    return std::nullopt;
}

inline Port successor(Port p) {
    return kPortOrder[(static_cast<std::size_t>(p) + 1) % kPortCount];
}

} // namespace multinoc::noc
