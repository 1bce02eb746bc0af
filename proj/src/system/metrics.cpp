// SPDX-License-Identifier: Apache-2.0
#include "multinoc/system/metrics.hpp"

#include <cstdio>
#include <map>
#include <tuple>

#include "multinoc/error.hpp"
#include "multinoc/noc/routing.hpp"

namespace multinoc::system {

LatencyReport latency_report(const std::vector<noc::PacketRecord>& packets,
                             int routing_cycles) {
    LatencyReport rep;
    std::uint64_t sum = 0;
    for (const auto& r : packets) {
        if (!r.delivered())
            continue;
        PacketLatency row;
        row.id = r.id;
        row.src = r.src;
        row.dst = r.dst;
        row.size_flits = r.size_flits;
        row.hops = r.hops;
        row.inject = r.inject_cycle;
        row.deliver = r.deliver_cycle;
        row.measured = r.deliver_cycle - r.inject_cycle;
        row.floor = noc::min_latency(r.hops, static_cast<int>(r.size_flits), routing_cycles);
        row.gap = row.measured - row.floor;
        if (row.gap == 0)
            ++rep.zero_gap_count;
        sum += row.measured;
        if (rep.packets.empty()) {
            rep.min = rep.max = row.measured;
        } else {
            rep.min = std::min(rep.min, row.measured);
            rep.max = std::max(rep.max, row.measured);
        }
        rep.packets.push_back(row);
    }
    if (!rep.packets.empty())
        rep.mean = static_cast<double>(sum) / static_cast<double>(rep.packets.size());
    return rep;
}

std::string LatencyReport::table() const {
    std::string out = "id src dst size hops inject deliver latency floor gap\n";
    char buf[160];
    for (const auto& p : packets) {
        std::snprintf(buf, sizeof buf, "%llu %u:%u %u:%u %u %d %llu %llu %llu %llu %llu\n",
                      static_cast<unsigned long long>(p.id), p.src.x, p.src.y, p.dst.x, p.dst.y,
                      p.size_flits, p.hops, static_cast<unsigned long long>(p.inject),
                      static_cast<unsigned long long>(p.deliver),
                      static_cast<unsigned long long>(p.measured),
                      static_cast<unsigned long long>(p.floor),
                      static_cast<unsigned long long>(p.gap));
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "packets=%zu min=%llu mean=%.2f max=%llu floor_hits=%zu\n",
                  packets.size(), static_cast<unsigned long long>(min), mean,
                  static_cast<unsigned long long>(max), zero_gap_count);
    out += buf;
    return out;
}

const ThroughputReport::RouterRate& ThroughputReport::router(int x, int y) const {
    for (const auto& r : routers)
        if (r.x == x && r.y == y)
            return r;
    throw DomainError("no such router in the report");
}

ThroughputReport throughput_report(const noc::Mesh& mesh, noc::Cycle begin, noc::Cycle end,
                                   int flit_bits, std::uint64_t clock_hz) {
    if (end <= begin)
        throw DomainError("throughput window is empty");
    if (!mesh.config().record_flit_events)
        throw DomainError("flit events were not recorded for this run");

    const int w = mesh.config().width;
    const int h = mesh.config().height;
    const double cycles = static_cast<double>(end - begin);
    // One flit crosses a link every 2 cycles (request/acknowledge handshake).
    const double link_peak_fpc = 0.5;
    const double hz = static_cast<double>(clock_hz);

    ThroughputReport rep;
    rep.begin = begin;
    rep.end = end;
    rep.peak_router_bits_per_s = noc::peak_router_throughput(hz, flit_bits, noc::kPortCount);

    std::vector<std::uint64_t> accepted(static_cast<std::size_t>(w) * h, 0);
    std::map<std::tuple<int, int, int, bool>, std::uint64_t> per_link;
    for (const auto& e : mesh.flit_events()) {
        if (e.cycle < begin || e.cycle >= end)
            continue;
        ++per_link[{e.x, e.y, static_cast<int>(e.port), e.local_inject}];
        if (e.local_inject) {
            accepted[static_cast<std::size_t>(e.y) * w + e.x] += 1;
        } else if (e.port != noc::Port::Local) {
            // The event names the upstream router; the flit lands next door.
            int nx = e.x, ny = e.y;
            switch (e.port) {
            case noc::Port::East: ++nx; break;
            case noc::Port::West: --nx; break;
            case noc::Port::North: ++ny; break;
            case noc::Port::South: --ny; break;
            case noc::Port::Local: break;
            }
            accepted[static_cast<std::size_t>(ny) * w + nx] += 1;
        }
        // port==Local && !local_inject is a delivery to the endpoint: it
        // leaves the fabric and is no router's acceptance.
    }

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            ThroughputReport::RouterRate r;
            r.x = x;
            r.y = y;
            r.flits = accepted[static_cast<std::size_t>(y) * w + x];
            r.flits_per_cycle = static_cast<double>(r.flits) / cycles;
            r.bits_per_s = r.flits_per_cycle * flit_bits * hz;
            r.utilization = r.bits_per_s / rep.peak_router_bits_per_s;
            rep.routers.push_back(r);
        }
    }
    for (const auto& [key, flits] : per_link) {
        ThroughputReport::LinkRate l;
        l.x = std::get<0>(key);
        l.y = std::get<1>(key);
        l.port = static_cast<noc::Port>(std::get<2>(key));
        l.inject = std::get<3>(key);
        l.flits = flits;
        l.flits_per_cycle = static_cast<double>(flits) / cycles;
        l.bits_per_s = l.flits_per_cycle * flit_bits * hz;
        l.utilization = l.flits_per_cycle / link_peak_fpc;
        rep.links.push_back(l);
    }
    return rep;
}

std::string ThroughputReport::table() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "window=[%llu,%llu) peak_router_bits_per_s=%.0f\n",
                  static_cast<unsigned long long>(begin),
                  static_cast<unsigned long long>(end), peak_router_bits_per_s);
    std::string out = buf;
    out += "router x y flits flits_per_cycle bits_per_s utilization\n";
    for (const auto& r : routers) {
        if (r.flits == 0)
            continue;
        std::snprintf(buf, sizeof buf, "router %d %d %llu %.4f %.0f %.4f\n", r.x, r.y,
                      static_cast<unsigned long long>(r.flits), r.flits_per_cycle,
                      r.bits_per_s, r.utilization);
        out += buf;
    }
    out += "link x y dir inject flits flits_per_cycle bits_per_s utilization\n";
    for (const auto& l : links) {
        std::snprintf(buf, sizeof buf, "link %d %d %s %d %llu %.4f %.0f %.4f\n", l.x, l.y,
                      noc::to_string(l.port), l.inject ? 1 : 0,
                      static_cast<unsigned long long>(l.flits), l.flits_per_cycle,
                      l.bits_per_s, l.utilization);
        out += buf;
    }
    return out;
}

} // namespace multinoc::system
