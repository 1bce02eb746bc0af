// SPDX-License-Identifier: Apache-2.0
#include "multinoc/noc/routing.hpp"

namespace multinoc::noc {

Port xy_route(NetAddress current, NetAddress target, int width, int height) {
    if (width < 1 || height < 1 || width > kMaxMeshDim || height > kMaxMeshDim)
        throw DomainError("mesh dimensions out of range");
    auto inside = [&](NetAddress a) { return a.x < width && a.y < height; };
    if (!inside(current) || !inside(target))
        throw DomainError("address outside mesh: current=" + to_string(current) +
                          " target=" + to_string(target));
    if (target.x > current.x) return Port::East;
    if (target.x < current.x) return Port::West;
    if (target.y > current.y) return Port::North;
    if (target.y < current.y) return Port::South;
    return Port::Local;
}

std::uint64_t min_latency(int routers, int size_flits, int routing_cycles) {
    if (routers < 1) throw DomainError("path must cross at least one router");
    if (size_flits < 3) throw DomainError("packet needs header, size and payload flits");
    if (routing_cycles < 7) throw DomainError("routing service time below 7 cycles");
    return static_cast<std::uint64_t>(routers) * routing_cycles +
           2ull * static_cast<std::uint64_t>(size_flits);
}

double peak_router_throughput(double clock_hz, int flit_bits, int max_connections) {
    if (clock_hz <= 0) throw DomainError("clock frequency must be positive");
    if (flit_bits <= 0) throw DomainError("flit width must be positive");
    if (max_connections <= 0) throw DomainError("connection count must be positive");
    return max_connections * flit_bits * clock_hz / 2.0;
}

} // namespace multinoc::noc
