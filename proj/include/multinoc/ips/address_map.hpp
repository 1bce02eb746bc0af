// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "multinoc/r8/core.hpp"

namespace multinoc::ips {

// Where a 16-bit processor address lands.
enum class AddressTarget : std::uint8_t {
    Local,          // [0, 1024): this core's memory
    OtherProcessor, // [1024, 2048): the partner core's memory
    RemoteMemory,   // [2048, 3072): the shared memory IP
    Notify,         // 0xFFFD: store -> notification packet to core = value
    Wait,           // 0xFFFE: store -> block until notified by core = value
    Io,             // 0xFFFF: store -> printf, load -> scanf
    Unmapped,       // everything else: simulator diagnostic, core halts
};

const char* to_string(AddressTarget t);

struct DecodedAddress {
    AddressTarget target = AddressTarget::Unmapped;
    std::uint16_t offset = 0; // meaningful for the three memory windows
};

// Total over the 16-bit space; windowed targets yield offset = addr - base.
DecodedAddress decode_address(std::uint16_t addr);

} // namespace multinoc::ips
