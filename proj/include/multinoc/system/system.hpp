// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <map>
#include <memory>
#include <vector>

#include "multinoc/ips/memory_ip.hpp"
#include "multinoc/ips/processor_ip.hpp"
#include "multinoc/ips/serial_ip.hpp"
#include "multinoc/noc/mesh.hpp"
#include "multinoc/system/config.hpp"
#include "multinoc/system/trace.hpp"

namespace multinoc::system {

// Outcome of a run() call.
struct RunResult {
    std::uint64_t cycles = 0;   // cycles advanced by this call
    bool quiescent = false;     // stopped because nothing is pending
    bool deadlock = false;      // stopped because nothing can ever progress
    std::string diagnostic;     // stuck-packet / blocked-core report when deadlocked
};

// A whole platform instance: the mesh plus one adapter per mapped core,
// wired from a SystemConfig, with an event trace captured as it runs.
//
// Trace stamps: every event is stamped with the cycle during which the
// change was observed. A packet's exact inject/deliver cycles live in the
// packet table (packets_csv); the deliver event carries the derived
// latency/floor/gap figures.
class System {
public:
    explicit System(SystemConfig cfg);
    System(const System&) = delete;
    System& operator=(const System&) = delete;

    const SystemConfig& config() const { return cfg_; }
    noc::Mesh& mesh() { return mesh_; }
    const noc::Mesh& mesh() const { return mesh_; }
    const services::CoreMap& core_map() const { return cfg_.map; }
    noc::Cycle now() const { return mesh_.now(); }

    ips::SerialIp* serial() { return serial_; }
    ips::ProcessorIp& processor(int core);
    ips::MemoryIp& memory_ip(int core);

    // Host side of the serial line. Bytes queue at the current cycle
    // boundary and cross the line at the configured byte interval.
    void host_send(const std::vector<std::uint8_t>& bytes);
    std::vector<std::uint8_t> host_take();
    std::size_t host_pending() const { return host_out_.size(); }

    void cycle(); // one clock edge plus trace capture

    // Advance until quiescent, provably stuck, or `budget` cycles have run
    // (0 uses config.max_cycles). Hitting the budget with flits still in
    // flight reports a probable deadlock with the stuck-packet locations.
    RunResult run(std::uint64_t budget = 0);

    // Nothing in flight, every adapter idle or waiting on the host.
    bool quiescent() const;
    // Network empty, no adapter can act, yet some adapter still waits on
    // the network: no future cycle or host byte can change anything.
    bool stuck() const;

    SimTrace& trace() { return trace_; }
    // Copies the packet table and final memory images into the trace.
    const SimTrace& finalize_trace();

private:
    void capture();
    std::string blocked_report() const;

    SystemConfig cfg_;
    noc::Mesh mesh_;
    std::vector<std::unique_ptr<ips::IpEndpoint>> owned_;
    std::map<int, ips::IpEndpoint*> by_core_;
    ips::SerialIp* serial_ = nullptr;
    std::map<int, ips::ProcessorIp*> procs_;
    std::map<int, ips::MemoryIp*> mems_;

    SimTrace trace_;
    std::size_t seen_records_ = 0;
    std::deque<noc::PacketId> outstanding_;
    struct CoreSnap {
        bool activated = false;
        bool halted = true;
        bool stalled = false;
    };
    std::map<int, CoreSnap> snaps_;
    std::map<int, std::size_t> seen_diags_;
    std::deque<std::uint8_t> host_shadow_; // queued host bytes not yet consumed
    std::vector<std::uint8_t> host_out_;   // crossed bytes awaiting host_take
};

} // namespace multinoc::system
