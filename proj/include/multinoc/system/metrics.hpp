// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multinoc/noc/mesh.hpp"

namespace multinoc::system {

// Per-packet latency against the analytic floor for its path:
//   floor = routers_on_path * routing_cycles + 2 * total_flits
// Measured latency can never sit below the floor; it equals the floor for
// packets that never waited on arbitration or buffer space.
struct PacketLatency {
    noc::PacketId id = 0;
    noc::NetAddress src, dst;
    std::uint32_t size_flits = 0;
    int hops = 0;
    noc::Cycle inject = 0, deliver = 0;
    std::uint64_t measured = 0;
    std::uint64_t floor = 0;
    std::uint64_t gap = 0; // measured - floor, contention-induced waiting
};

struct LatencyReport {
    std::vector<PacketLatency> packets; // delivered packets, injection order
    std::uint64_t min = 0, max = 0;
    double mean = 0.0;
    std::size_t zero_gap_count = 0; // packets that hit the floor exactly

    std::string table() const; // one line per packet plus an aggregate line
};

LatencyReport latency_report(const std::vector<noc::PacketRecord>& packets,
                             int routing_cycles);

// Accepted-flit rates over the half-open cycle window [begin, end), per
// router and per link, from the mesh's flit-event record. A router's peak is
// one flit per port per 2-cycle handshake across its 5 ports; utilization is
// the measured rate against that peak.
struct ThroughputReport {
    struct RouterRate {
        int x = 0, y = 0;
        std::uint64_t flits = 0; // accepted into this router in the window
        double flits_per_cycle = 0.0;
        double bits_per_s = 0.0;
        double utilization = 0.0; // of the 5-port peak, in [0,1]
    };
    struct LinkRate {
        int x = 0, y = 0;        // upstream end
        noc::Port port;          // output direction (Local = delivery)
        bool inject = false;     // endpoint->router link
        std::uint64_t flits = 0;
        double flits_per_cycle = 0.0;
        double bits_per_s = 0.0;
        double utilization = 0.0; // of the 1-flit-per-2-cycles link peak
    };

    noc::Cycle begin = 0, end = 0;
    std::vector<RouterRate> routers; // every router, row-major
    std::vector<LinkRate> links;     // only links that moved flits
    double peak_router_bits_per_s = 0.0;

    const RouterRate& router(int x, int y) const;
    std::string table() const;
};

ThroughputReport throughput_report(const noc::Mesh& mesh, noc::Cycle begin, noc::Cycle end,
                                   int flit_bits, std::uint64_t clock_hz);

} // namespace multinoc::system
