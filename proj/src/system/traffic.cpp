// SPDX-License-Identifier: Apache-2.0
#include "multinoc/system/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "multinoc/error.hpp"

namespace multinoc::system {

std::vector<ScheduledPacket> traffic_generate(const noc::MeshConfig& mesh,
                                              const TrafficConfig& cfg) {
    if (!(cfg.rate > 0.0) || cfg.rate > 1.0)
        throw ConfigError("traffic rate must lie in (0, 1] flits per cycle per node");
    if (cfg.min_flits < 3 || cfg.max_flits > 258 || cfg.min_flits > cfg.max_flits)
        throw ConfigError("packet sizes must lie within [3, 258] wire flits");
    const int nodes = mesh.width * mesh.height;
    if (nodes < 2)
        throw ConfigError("synthetic traffic needs at least two nodes");

    std::vector<ScheduledPacket> out;
    for (int node = 0; node < nodes; ++node) {
        const int mirror = nodes - 1 - node;
        if (cfg.pattern == TrafficPattern::PairWise && mirror == node)
            continue; // the centre of an odd mesh has no pair partner
        std::mt19937_64 rng(cfg.seed ^ (0x9E3779B97F4A7C15ull * (node + 1)));
        std::uniform_int_distribution<int> size_dist(cfg.min_flits, cfg.max_flits);
        std::uniform_int_distribution<int> dst_dist(0, nodes - 2);
        std::uniform_real_distribution<double> jitter(0.5, 1.5);
        noc::Cycle t = 0;
        for (;;) {
            const int size = size_dist(rng);
            int dst_node;
            if (cfg.pattern == TrafficPattern::PairWise) {
                dst_node = mirror;
            } else {
                dst_node = dst_dist(rng);
                if (dst_node >= node)
                    ++dst_node; // uniform over the other nodes
            }
            const double gap = size / cfg.rate * jitter(rng);
            t += static_cast<noc::Cycle>(std::max<long long>(1, std::llround(gap)));
            if (t > cfg.horizon)
                break;
            ScheduledPacket sp;
            sp.node = node;
            sp.when = t;
            sp.dst = noc::NetAddress{static_cast<std::uint8_t>(dst_node % mesh.width),
                                     static_cast<std::uint8_t>(dst_node / mesh.width)};
            sp.total_flits = size;
            out.push_back(sp);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.when != b.when ? a.when < b.when : a.node < b.node;
    });
    return out;
}

std::vector<noc::Flit> traffic_packet(noc::NetAddress dst, int total_flits) {
    if (total_flits < 3)
        throw DomainError("a packet needs a header, a length and payload");
    std::vector<noc::Flit> flits;
    flits.reserve(static_cast<std::size_t>(total_flits));
    flits.push_back(static_cast<noc::Flit>((dst.x << 4) | (dst.y & 0x0F)));
    int payload;
    if (total_flits <= 257) {
        payload = total_flits - 2;
        flits.push_back(static_cast<noc::Flit>(payload));
    } else {
        payload = total_flits - 4;
        if (payload > 0xFFFF)
            throw DomainError("packet too long even for the extended length form");
        flits.push_back(0x00);
        flits.push_back(static_cast<noc::Flit>(payload >> 8));
        flits.push_back(static_cast<noc::Flit>(payload & 0xFF));
    }
    for (int i = 0; i < payload; ++i)
        flits.push_back(static_cast<noc::Flit>(i & 0xFF));
    return flits;
}

TrafficRunStats run_traffic(noc::Mesh& mesh, const std::vector<ScheduledPacket>& schedule,
                            std::uint64_t max_cycles) {
    TrafficRunStats stats;
    stats.scheduled = schedule.size();
    for (const auto& sp : schedule)
        mesh.stub(sp.node).schedule_packet(sp.when, traffic_packet(sp.dst, sp.total_flits));
    const int nodes = mesh.node_count();
    for (; stats.cycles < max_cycles; ++stats.cycles) {
        bool sources_done = true;
        for (int n = 0; n < nodes && sources_done; ++n)
            sources_done = mesh.stub(n).tx_empty();
        if (sources_done && mesh.idle() && mesh.packets().size() == stats.scheduled &&
            mesh.undelivered_count() == 0) {
            stats.drained = true;
            break;
        }
        mesh.cycle();
    }
    stats.delivered = 0;
    for (const auto& r : mesh.packets())
        if (r.delivered())
            ++stats.delivered;
    if (!stats.drained)
        stats.drained = stats.delivered == stats.scheduled && mesh.idle();
    return stats;
}

} // namespace multinoc::system
