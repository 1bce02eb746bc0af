// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "multinoc/noc/mesh.hpp"

namespace multinoc::system {

// One simulation event. `detail` is a space-separated key=value tail; the
// rendered line is "cycle=<n> event=<kind> <detail>".
struct TraceEvent {
    noc::Cycle cycle = 0;
    std::string kind;
    std::string detail;
};

// Deterministic, ordered record of a run: packet injections/deliveries, core
// state changes, serial bytes, diagnostics, and the final memory images.
// Identical configurations produce bit-for-bit identical traces.
struct SimTrace {
    std::vector<TraceEvent> events;
    std::vector<noc::PacketRecord> packets;             // final packet table
    std::map<int, std::vector<std::uint16_t>> final_memories; // core -> 1024 words

    void log(noc::Cycle cycle, std::string kind, std::string detail);

    // Line-oriented text form: one "cycle=... event=..." line per event,
    // then the non-zero words of each final memory image.
    std::string text() const;

    // Machine-readable packet table.
    std::string packets_csv() const;

    // 64-bit FNV-1a over text(): two traces hash equal iff they render equal.
    std::uint64_t hash() const;
};

// FNV-1a, the trace-hashing primitive (exposed for tests and tools).
std::uint64_t fnv1a(const std::string& bytes);

} // namespace multinoc::system
