// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "multinoc/noc/types.hpp"

namespace multinoc::noc {

// XY dimension-order routing: correct x first, then y, then local delivery.
// `width`/`height` are the mesh dimensions; both addresses must lie inside.
Port xy_route(NetAddress current, NetAddress target, int width, int height);

// Zero-load latency floor in cycles for a packet of `size_flits` total flits
// crossing `routers` routers (source and target routers both counted), with
// `routing_cycles` of routing service per router and a 2-cycle link handshake
// per flit. The simulator meets this floor exactly on an idle mesh.
//   routers >= 1, size_flits >= 3 (header + size + at least one payload flit),
//   routing_cycles >= 7.
std::uint64_t min_latency(int routers, int size_flits, int routing_cycles);

// Peak aggregate forwarding bandwidth of one router in bits per second:
// `max_connections` simultaneous connections, each moving one `flit_bits`-wide
// flit per 2 clock cycles. 50 MHz, 8-bit flits, 5 connections -> 1e9 bits/s.
double peak_router_throughput(double clock_hz, int flit_bits, int max_connections);

} // namespace multinoc::noc
