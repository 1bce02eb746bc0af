// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "multinoc/noc/flit_buffer.hpp"
#include "multinoc/noc/link.hpp"
#include "multinoc/noc/types.hpp"

namespace multinoc::noc {

// Wormhole packet parse position, tracked per active connection so the router
// knows when the worm ends. The flit after the header carries the remaining
// flit count; value 0x00 selects the extended form where the next two flits
// carry a 16-bit count (used by long benchmark streams, never by the
// platform's service packets).
enum class WormParse : std::uint8_t { Size, ExtHi, ExtLo, Payload };

struct InputPort {
    enum class State : std::uint8_t {
        Idle,       // no routed header at the buffer head
        Deciding,   // the routing engine is serving this input's header
        Requesting, // routed; waiting for the output port grant
        Streaming,  // connection active; forwarding the worm
    };

    explicit InputPort(std::size_t depth) : buffer(depth) {}

    FifoBuffer<TaggedFlit> buffer;
    State state = State::Idle;
    Port out = Port::Local;       // routed output (Requesting/Streaming)
    WormParse parse = WormParse::Size;
    std::uint32_t remaining = 0;  // flits left after the current parse point
    std::uint8_t ext_hi = 0;
    bool header_in_flight = false; // between grant and the header landing downstream
};

// Per-router state. The mesh drives the cycle schedule; a router holds its
// input buffers, the single routing engine, the shared round-robin pointer
// and the output-connection table.
struct Router {
    NetAddress addr;
    std::array<std::optional<InputPort>, kPortCount> in;
    std::array<std::optional<Port>, kPortCount> out_owner; // input owning each output
    Port arb_pointer = Port::East;

    // Routing engine: serves one header at a time; `engine_done_at` is the
    // cycle in which the routed input becomes grantable (7-cycle service =
    // 5 decision cycles here + the header's own 2-cycle transfer).
    std::optional<Port> engine_input;
    Cycle engine_done_at = 0;

    std::uint64_t accepted_flits = 0;  // committed into this router's input buffers
    std::uint64_t forwarded_flits = 0; // offered onto this router's output links
    std::array<std::array<std::uint64_t, kPortCount>, kPortCount> grant_matrix{}; // [out][in]

    InputPort* input(Port p) { return in[static_cast<std::size_t>(p)] ? &*in[static_cast<std::size_t>(p)] : nullptr; }
    const InputPort* input(Port p) const { return in[static_cast<std::size_t>(p)] ? &*in[static_cast<std::size_t>(p)] : nullptr; }
    std::optional<Port>& owner(Port p) { return out_owner[static_cast<std::size_t>(p)]; }

    int connection_count() const {
        int n = 0;
        for (auto& o : out_owner) n += o.has_value();
        return n;
    }
};

} // namespace multinoc::noc
