// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "multinoc/noc/mesh.hpp"

namespace multinoc::system {

enum class TrafficPattern : std::uint8_t {
    UniformRandom, // each packet picks a fresh destination != source
    PairWise,      // node i talks only to its mirror node (N-1-i)
};

// Synthetic load for NoC-only runs. `rate` is the offered load per node in
// flits per cycle, in (0,1]; packet sizes are drawn uniformly from
// [min_flits, max_flits] counting every wire flit (258 exercises the
// extended length form). The same config always yields the same schedule.
struct TrafficConfig {
    TrafficPattern pattern = TrafficPattern::UniformRandom;
    double rate = 0.1;
    std::uint64_t seed = 1;
    std::uint64_t horizon = 10'000; // stop scheduling past this cycle
    int min_flits = 3;
    int max_flits = 258;
};

struct ScheduledPacket {
    int node = 0; // source node index
    noc::Cycle when = 0;
    noc::NetAddress dst;
    int total_flits = 0;
};

// Deterministic schedule: per-node mt19937_64 streams seeded from
// (seed, node); interarrival = max(1, round(size / rate * u)), u in [0.5,1.5).
std::vector<ScheduledPacket> traffic_generate(const noc::MeshConfig& mesh,
                                              const TrafficConfig& cfg);

// Raw wire flits for a synthetic packet: header, length (extended above 257
// total flits), then a counting payload.
std::vector<noc::Flit> traffic_packet(noc::NetAddress dst, int total_flits);

struct TrafficRunStats {
    std::uint64_t scheduled = 0;
    std::uint64_t delivered = 0;
    std::uint64_t cycles = 0;
    bool drained = false; // every scheduled packet delivered
};

// Queue the schedule onto the mesh's built-in stubs and cycle until drained
// or `max_cycles`. The mesh must still have its stubs attached.
TrafficRunStats run_traffic(noc::Mesh& mesh, const std::vector<ScheduledPacket>& schedule,
                            std::uint64_t max_cycles);

} // namespace multinoc::system
