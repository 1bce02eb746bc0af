// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "multinoc/error.hpp"

namespace multinoc::noc {

// One flit. The mesh moves 8-bit flits; packet headers pack a mesh address
// into a single flit, which is what bounds the mesh at 16x16.
using Flit = std::uint8_t;
inline constexpr int kFlitBits = 8;
inline constexpr int kMaxMeshDim = 16;

using Cycle = std::uint64_t;

// Router port, in the arbiter's cyclic order.
enum class Port : std::uint8_t { East = 0, West = 1, North = 2, South = 3, Local = 4 };
inline constexpr int kPortCount = 5;
inline constexpr std::array<Port, kPortCount> kPortOrder = {
    Port::East, Port::West, Port::North, Port::South, Port::Local};

inline const char* to_string(Port p) {
    switch (p) {
    case Port::East: return "east";
    case Port::West: return "west";
    case Port::North: return "north";
    case Port::South: return "south";
    case Port::Local: return "local";
    }
    return "?";
}

inline Port opposite(Port p) {
    switch (p) {
    case Port::East: return Port::West;
    case Port::West: return Port::East;
    case Port::North: return Port::South;
    case Port::South: return Port::North;
    case Port::Local: return Port::Local;
    }
    return Port::Local;
}

// Mesh coordinate. Wire form packs x into the high nibble of the header flit.
struct NetAddress {
    std::uint8_t x = 0;
    std::uint8_t y = 0;

    std::uint8_t packed() const { return static_cast<std::uint8_t>((x << 4) | (y & 0x0F)); }

    static NetAddress unpack(Flit f) {
        return NetAddress{static_cast<std::uint8_t>(f >> 4), static_cast<std::uint8_t>(f & 0x0F)};
    }

    bool operator==(const NetAddress&) const = default;
};

inline std::string to_string(NetAddress a) {
    return "(" + std::to_string(a.x) + "," + std::to_string(a.y) + ")";
}

inline int manhattan(NetAddress a, NetAddress b) {
    return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

} // namespace multinoc::noc
