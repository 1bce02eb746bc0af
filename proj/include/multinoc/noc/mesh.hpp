// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "multinoc/noc/link.hpp"
#include "multinoc/noc/router.hpp"
#include "multinoc/noc/routing.hpp"
#include "multinoc/noc/types.hpp"

namespace multinoc::noc {

// Client attached to a router's local port: an IP adapter or a traffic stub.
//
// Cycle contract: the mesh pulls injection flits during its compute phase
// (tx_ready/tx_front must be stable within a cycle; tx_pop marks the flit's
// transfer as started). rx_deliver hands over a flit whose transfer committed
// this cycle; it is usable from `usable_from`. on_cycle runs after the mesh
// commit; state changed there (including new tx flits) takes effect in the
// next cycle's compute.
class Endpoint {
public:
    virtual ~Endpoint() = default;
    virtual bool tx_ready(Cycle now) const = 0;
    virtual Flit tx_front(Cycle now) const = 0;
    virtual void tx_pop(Cycle now) = 0;
    virtual void rx_deliver(Flit f, Cycle usable_from) = 0;
    virtual void on_cycle(Cycle /*now*/) {}
};

// Scheduled source / recording sink used in NoC-only runs and tests.
class StubEndpoint : public Endpoint {
public:
    // Queue a raw packet (header, size, payload flits) for injection no
    // earlier than cycle `when`. Packets go out in schedule order.
    void schedule_packet(Cycle when, std::vector<Flit> flits);

    bool tx_ready(Cycle now) const override;
    Flit tx_front(Cycle now) const override;
    void tx_pop(Cycle now) override;
    void rx_deliver(Flit f, Cycle usable_from) override;

    bool tx_empty() const { return queue_.empty(); }
    struct RxFlit {
        Cycle cycle;
        Flit value;
    };
    const std::vector<RxFlit>& received() const { return rx_; }

private:
    struct Entry {
        Cycle when;
        std::vector<Flit> flits;
        std::size_t cursor = 0;
    };
    std::deque<Entry> queue_;
    std::vector<RxFlit> rx_;
};

// Per-packet metrics row. `deliver_cycle` counts the cycle the last flit
// becomes usable at the destination endpoint; `inject_cycle` the cycle the
// header's transfer starts on the source local link. Zero until delivered.
struct PacketRecord {
    PacketId id = 0;
    NetAddress src;
    NetAddress dst;
    std::uint32_t size_flits = 0;
    std::uint32_t delivered_flits = 0;
    Cycle inject_cycle = 0;
    Cycle deliver_cycle = 0;
    int hops = 0; // routers crossed, source and target included

    bool delivered() const { return deliver_cycle != 0; }
};

// One completed flit transfer, recorded when flit-event capture is enabled.
// `x`,`y`,`port` name the upstream end of the link; `local_inject` marks
// endpoint->router links (otherwise the link is a router output).
struct FlitEvent {
    Cycle cycle;
    std::uint8_t x, y;
    Port port;
    bool local_inject;
};

struct MeshConfig {
    int width = 2;
    int height = 2;
    int buffer_depth = 2;
    int routing_cycles = 7;
    bool record_flit_events = false;
    bool audit = false; // per-cycle flit-conservation and ordering checks
};

// The synchronous wormhole mesh: WxH routers, XY routing, round-robin
// arbitration, 2-flit input buffers, 2-cycle link handshakes, 7-cycle routing
// service. One call to cycle() advances every router, link and endpoint by
// one clock edge; iteration order is fixed, so runs are deterministic.
class Mesh {
public:
    explicit Mesh(MeshConfig cfg);

    const MeshConfig& config() const { return cfg_; }
    int node_count() const { return cfg_.width * cfg_.height; }
    int node_index(NetAddress a) const { return a.y * cfg_.width + a.x; }
    NetAddress node_address(int index) const {
        return NetAddress{static_cast<std::uint8_t>(index % cfg_.width),
                          static_cast<std::uint8_t>(index / cfg_.width)};
    }

    // Replace the default stub at `node`. The mesh does not own `ep`.
    void set_endpoint(int node, Endpoint* ep);
    StubEndpoint& stub(int node); // the built-in stub (NoC-only mode)

    void cycle();
    Cycle now() const { return now_; }

    Router& router(int x, int y) { return routers_[y * cfg_.width + x]; }
    const Router& router(int x, int y) const { return routers_[y * cfg_.width + x]; }

    // A connection counts as established once its header flit has landed
    // downstream (7 cycles after the header reached the buffer head, when
    // unblocked).
    bool connection_established(int x, int y, Port in_port) const;
    int established_connections(int x, int y) const;

    const std::vector<PacketRecord>& packets() const { return records_; }
    const PacketRecord* packet(PacketId id) const {
        return (id >= 1 && id <= records_.size()) ? &records_[id - 1] : nullptr;
    }
    std::size_t undelivered_count() const;

    const std::vector<FlitEvent>& flit_events() const { return flit_events_; }

    std::uint64_t in_flight_flits() const; // buffers plus busy links
    bool idle() const { return in_flight_flits() == 0; }

    const std::vector<std::string>& audit_errors() const { return audit_errors_; }

    // Locations of every in-flight flit, grouped per packet (watchdog report).
    std::vector<std::string> stuck_report() const;

private:
    struct WireParse {
        enum class Expect : std::uint8_t { Header, Size, ExtHi, ExtLo, Payload } expect =
            Expect::Header;
        PacketId id = 0;
        std::uint32_t remaining = 0;
        std::uint8_t ext_hi = 0;
    };

    Link* out_link(int router_index, Port p) {
        auto& l = out_links_[router_index][static_cast<std::size_t>(p)];
        return l ? l.get() : nullptr;
    }
    const Link* out_link(int router_index, Port p) const {
        auto& l = out_links_[router_index][static_cast<std::size_t>(p)];
        return l ? l.get() : nullptr;
    }
    int neighbor_index(int router_index, Port p) const;

    void compute_router(int index);
    void inject_locals();
    void deliver_links(const std::vector<std::uint8_t>& pre_counts);
    void run_audit();

    PacketId parse_injection(int node, Flit f);
    void parse_delivery(int node, const TaggedFlit& f);

    MeshConfig cfg_;
    Cycle now_ = 0;
    int decision_cycles_;
    std::vector<Router> routers_;
    std::vector<std::array<std::unique_ptr<Link>, kPortCount>> out_links_;
    std::vector<Link> local_in_links_;
    std::vector<std::unique_ptr<StubEndpoint>> stubs_;
    std::vector<Endpoint*> endpoints_;
    std::vector<WireParse> inject_parse_;
    std::vector<WireParse> deliver_parse_;
    std::vector<PacketRecord> records_;
    std::vector<FlitEvent> flit_events_;
    std::vector<std::string> audit_errors_;
    std::uint64_t injected_flits_ = 0;
    std::uint64_t delivered_flits_total_ = 0;
};

} // namespace multinoc::noc
