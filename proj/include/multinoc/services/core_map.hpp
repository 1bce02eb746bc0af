// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "multinoc/error.hpp"
#include "multinoc/noc/types.hpp"

namespace multinoc::services {

enum class NodeRole : std::uint8_t {
    Serial,    // host bridge
    Processor, // program-running core
    Memory,    // shared memory bank
};

const char* to_string(NodeRole r);

struct CoreInfo {
    int core = 0; // platform-wide core id, also the service `source` field
    noc::NetAddress addr;
    NodeRole role = NodeRole::Processor;
    std::string name;
};

// Assignment of core ids to mesh positions and roles. Core ids are dense
// starting at 0. At most one core is the serial bridge.
class CoreMap {
public:
    CoreMap(int width, int height, std::vector<CoreInfo> cores);

    // The 2x2 reference platform: serial bridge at (0,0), processors at
    // (1,0) and (0,1), shared memory at (1,1).
    static CoreMap standard();

    int width() const { return width_; }
    int height() const { return height_; }
    int count() const { return static_cast<int>(cores_.size()); }

    const CoreInfo& info(int core) const;
    noc::NetAddress address_of(int core) const { return info(core).addr; }
    NodeRole role_of(int core) const { return info(core).role; }
    std::optional<int> core_at(noc::NetAddress addr) const;

    std::optional<int> serial_core() const;
    std::vector<int> processors() const;
    std::vector<int> memories() const;

    const std::vector<CoreInfo>& cores() const { return cores_; }

private:
    int width_;
    int height_;
    std::vector<CoreInfo> cores_;
};

} // namespace multinoc::services
