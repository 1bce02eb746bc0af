// SPDX-License-Identifier: Apache-2.0
#include "multinoc/noc/mesh.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "multinoc/noc/arbiter.hpp"

namespace multinoc::noc {

void StubEndpoint::schedule_packet(Cycle when, std::vector<Flit> flits) {
    if (flits.size() < 2) throw DomainError("packet needs at least header and size flits");
    if (!queue_.empty() && queue_.back().when > when)
        throw DomainError("stub packets must be scheduled in nondecreasing cycle order");
    queue_.push_back(Entry{when, std::move(flits), 0});
}

bool StubEndpoint::tx_ready(Cycle now) const {
    // Once a packet's first flit has gone out, the rest follows regardless of
    // the next entry's release cycle; packets themselves gate on `when`.
    if (queue_.empty()) return false;
    const Entry& e = queue_.front();
    return e.cursor > 0 || e.when <= now;
}

Flit StubEndpoint::tx_front(Cycle now) const {
    (void)now;
    return queue_.front().flits[queue_.front().cursor];
}

void StubEndpoint::tx_pop(Cycle now) {
    (void)now;
    Entry& e = queue_.front();
    if (++e.cursor == e.flits.size()) queue_.pop_front();
}

void StubEndpoint::rx_deliver(Flit f, Cycle usable_from) {
    rx_.push_back(RxFlit{usable_from, f});
}

Mesh::Mesh(MeshConfig cfg) : cfg_(cfg) {
    if (cfg_.width < 1 || cfg_.height < 1 || cfg_.width > kMaxMeshDim || cfg_.height > kMaxMeshDim)
        throw ConfigError("mesh dimensions must be within 1x1 .. 16x16");
    if (cfg_.buffer_depth < 1) throw ConfigError("buffer depth must be at least 1");
    if (cfg_.routing_cycles < 7) throw ConfigError("routing service time below 7 cycles");
    decision_cycles_ = cfg_.routing_cycles - 2;

    int n = node_count();
    routers_.reserve(n);
    out_links_.resize(n);
    local_in_links_.resize(n);
    stubs_.resize(n);
    endpoints_.resize(n);
    inject_parse_.resize(n);
    deliver_parse_.resize(n);
    for (int i = 0; i < n; ++i) {
        Router r;
        r.addr = node_address(i);
        bool has_east = r.addr.x + 1 < cfg_.width;
        bool has_west = r.addr.x > 0;
        bool has_north = r.addr.y + 1 < cfg_.height;
        bool has_south = r.addr.y > 0;
        auto make_in = [&](Port p, bool exists) {
            if (exists) r.in[static_cast<std::size_t>(p)].emplace(cfg_.buffer_depth);
        };
        make_in(Port::East, has_east);
        make_in(Port::West, has_west);
        make_in(Port::North, has_north);
        make_in(Port::South, has_south);
        make_in(Port::Local, true);
        auto make_out = [&](Port p, bool exists) {
            if (exists) out_links_[i][static_cast<std::size_t>(p)] = std::make_unique<Link>();
        };
        make_out(Port::East, has_east);
        make_out(Port::West, has_west);
        make_out(Port::North, has_north);
        make_out(Port::South, has_south);
        make_out(Port::Local, true);
        routers_.push_back(std::move(r));
        stubs_[i] = std::make_unique<StubEndpoint>();
        endpoints_[i] = stubs_[i].get();
    }
}

void Mesh::set_endpoint(int node, Endpoint* ep) {
    endpoints_.at(node) = ep ? ep : stubs_[node].get();
}

StubEndpoint& Mesh::stub(int node) { return *stubs_.at(node); }

int Mesh::neighbor_index(int router_index, Port p) const {
    switch (p) {
    case Port::East: return router_index + 1;
    case Port::West: return router_index - 1;
    case Port::North: return router_index + cfg_.width;
    case Port::South: return router_index - cfg_.width;
    case Port::Local: break;
    }
    throw DomainError("local port has no neighbor");
}

bool Mesh::connection_established(int x, int y, Port in_port) const {
    const InputPort* ip = router(x, y).input(in_port);
    return ip && ip->state == InputPort::State::Streaming && !ip->header_in_flight;
}

int Mesh::established_connections(int x, int y) const {
    int count = 0;
    for (Port p : kPortOrder)
        if (connection_established(x, y, p)) ++count;
    return count;
}

std::size_t Mesh::undelivered_count() const {
    std::size_t n = 0;
    for (const auto& r : records_)
        if (!r.delivered()) ++n;
    return n;
}

PacketId Mesh::parse_injection(int node, Flit f) {
    WireParse& p = inject_parse_[node];
    using E = WireParse::Expect;
    switch (p.expect) {
    case E::Header: {
        NetAddress dst = NetAddress::unpack(f);
        if (dst.x >= cfg_.width || dst.y >= cfg_.height)
            throw DomainError("packet header addresses " + to_string(dst) +
                              " outside the mesh");
        PacketRecord rec;
        rec.id = static_cast<PacketId>(records_.size() + 1);
        rec.src = node_address(node);
        rec.dst = dst;
        rec.inject_cycle = now_;
        rec.hops = manhattan(rec.src, rec.dst) + 1;
        records_.push_back(rec);
        p.id = rec.id;
        p.expect = E::Size;
        break;
    }
    case E::Size:
        if (f == 0) {
            p.expect = E::ExtHi;
        } else {
            p.remaining = f;
            records_[p.id - 1].size_flits = 2u + f;
            p.expect = E::Payload;
        }
        break;
    case E::ExtHi:
        p.ext_hi = f;
        p.expect = E::ExtLo;
        break;
    case E::ExtLo:
        p.remaining = (static_cast<std::uint32_t>(p.ext_hi) << 8) | f;
        records_[p.id - 1].size_flits = 4u + p.remaining;
        p.expect = p.remaining ? E::Payload : E::Header;
        break;
    case E::Payload:
        if (--p.remaining == 0) p.expect = E::Header;
        break;
    }
    return p.id;
}

void Mesh::parse_delivery(int node, const TaggedFlit& f) {
    WireParse& p = deliver_parse_[node];
    using E = WireParse::Expect;
    if (p.expect == E::Header) {
        p.id = f.packet;
    } else if (cfg_.audit && f.packet != p.id && audit_errors_.size() < 100) {
        audit_errors_.push_back("cycle " + std::to_string(now_) + ": node " +
                                std::to_string(node) + " saw flit of packet " +
                                std::to_string(f.packet) + " inside packet " +
                                std::to_string(p.id));
    }
    switch (p.expect) {
    case E::Header: p.expect = E::Size; break;
    case E::Size:
        if (f.value == 0) {
            p.expect = E::ExtHi;
        } else {
            p.remaining = f.value;
            p.expect = E::Payload;
        }
        break;
    case E::ExtHi:
        p.ext_hi = f.value;
        p.expect = E::ExtLo;
        break;
    case E::ExtLo:
        p.remaining = (static_cast<std::uint32_t>(p.ext_hi) << 8) | f.value;
        p.expect = p.remaining ? E::Payload : E::Header;
        break;
    case E::Payload:
        if (--p.remaining == 0) p.expect = E::Header;
        break;
    }
    if (f.packet >= 1 && f.packet <= records_.size()) {
        PacketRecord& rec = records_[f.packet - 1];
        ++rec.delivered_flits;
        if (rec.size_flits && rec.delivered_flits == rec.size_flits)
            rec.deliver_cycle = now_ + 1;
    }
}

void Mesh::compute_router(int index) {
    Router& r = routers_[index];

    // Engine completion: the routed header becomes grantable.
    if (r.engine_input && now_ >= r.engine_done_at) {
        InputPort* ip = r.input(*r.engine_input);
        ip->state = InputPort::State::Requesting;
        r.engine_input.reset();
    }

    // Engine admission: one unrouted buffer-head header enters the 5-cycle
    // decision; round-robin picks among the waiting inputs.
    if (!r.engine_input) {
        PortSet waiting;
        for (Port p : kPortOrder) {
            const InputPort* ip = r.input(p);
            if (ip && ip->state == InputPort::State::Idle && !ip->buffer.empty()) waiting.set(p);
        }
        if (auto pick = arbitrate(waiting, r.arb_pointer)) {
            InputPort* ip = r.input(*pick);
            ip->state = InputPort::State::Deciding;
            ip->out = xy_route(r.addr, NetAddress::unpack(ip->buffer.front()->value),
                               cfg_.width, cfg_.height);
            r.engine_input = *pick;
            r.engine_done_at = now_ + decision_cycles_;
            r.arb_pointer = successor(*pick);
        }
    }

    // Output grants: a routed header whose output is free and whose link is
    // idle wins the port and starts its transfer; the pending request of a
    // blocked header persists until granted here.
    for (Port out : kPortOrder) {
        if (r.owner(out)) continue;
        Link* link = out_link(index, out);
        if (!link || !link->idle()) continue;
        PortSet requesters;
        for (Port p : kPortOrder) {
            const InputPort* ip = r.input(p);
            if (ip && ip->state == InputPort::State::Requesting && ip->out == out)
                requesters.set(p);
        }
        auto grant = arbitrate(requesters, r.arb_pointer);
        if (!grant) continue;
        InputPort* ip = r.input(*grant);
        auto header = ip->buffer.pop();
        link->offer(*header, now_);
        r.owner(out) = *grant;
        ip->state = InputPort::State::Streaming;
        ip->parse = WormParse::Size;
        ip->remaining = 0;
        ip->header_in_flight = true;
        ++r.forwarded_flits;
        ++r.grant_matrix[static_cast<std::size_t>(out)][static_cast<std::size_t>(*grant)];
        r.arb_pointer = successor(*grant);
    }

    // Streaming: each active connection forwards one flit per free link slot
    // (one flit per two cycles sustained). The connection tears down exactly
    // when the worm's last flit is offered.
    for (Port in : kPortOrder) {
        InputPort* ip = r.input(in);
        if (!ip || ip->state != InputPort::State::Streaming) continue;
        Link* link = out_link(index, ip->out);
        if (!link->idle() || ip->buffer.empty()) continue;
        TaggedFlit f = *ip->buffer.pop();
        bool last = false;
        switch (ip->parse) {
        case WormParse::Size:
            if (f.value == 0) {
                ip->parse = WormParse::ExtHi;
            } else {
                ip->remaining = f.value;
                ip->parse = WormParse::Payload;
            }
            break;
        case WormParse::ExtHi:
            ip->ext_hi = f.value;
            ip->parse = WormParse::ExtLo;
            break;
        case WormParse::ExtLo:
            ip->remaining = (static_cast<std::uint32_t>(ip->ext_hi) << 8) | f.value;
            ip->parse = WormParse::Payload;
            last = ip->remaining == 0;
            break;
        case WormParse::Payload:
            last = --ip->remaining == 0;
            break;
        }
        link->offer(f, now_);
        ++r.forwarded_flits;
        if (last) {
            r.owner(ip->out).reset();
            ip->state = InputPort::State::Idle;
        }
    }
}

void Mesh::inject_locals() {
    for (int node = 0; node < node_count(); ++node) {
        Link& link = local_in_links_[node];
        Endpoint* ep = endpoints_[node];
        if (!link.idle() || !ep->tx_ready(now_)) continue;
        Flit f = ep->tx_front(now_);
        PacketId id = parse_injection(node, f);
        ep->tx_pop(now_);
        link.offer(TaggedFlit{f, id}, now_);
        ++injected_flits_;
    }
}

void Mesh::deliver_links(const std::vector<std::uint8_t>& pre_counts) {
    auto buffer_slot = [&](int router_index, Port p) {
        return router_index * kPortCount + static_cast<int>(p);
    };
    int n = node_count();
    for (int i = 0; i < n; ++i) {
        for (Port out : kPortOrder) {
            Link* link = out_link(i, out);
            if (!link || link->idle()) continue;
            if (out == Port::Local) {
                auto f = link->try_deliver(now_, true);
                if (!f) continue;
                parse_delivery(i, *f);
                ++delivered_flits_total_;
                endpoints_[i]->rx_deliver(f->value, now_ + 1);
                if (cfg_.record_flit_events)
                    flit_events_.push_back(
                        FlitEvent{now_, routers_[i].addr.x, routers_[i].addr.y, out, false});
                if (auto& owner = routers_[i].owner(out))
                    routers_[i].input(*owner)->header_in_flight = false;
            } else {
                int ni = neighbor_index(i, out);
                InputPort* dst = routers_[ni].input(opposite(out));
                bool space = pre_counts[buffer_slot(ni, opposite(out))] < dst->buffer.capacity();
                auto f = link->try_deliver(now_, space);
                if (!f) continue;
                if (!dst->buffer.push(*f) && audit_errors_.size() < 100)
                    audit_errors_.push_back("cycle " + std::to_string(now_) +
                                            ": buffer overflow at router " +
                                            to_string(routers_[ni].addr));
                ++routers_[ni].accepted_flits;
                if (cfg_.record_flit_events)
                    flit_events_.push_back(
                        FlitEvent{now_, routers_[i].addr.x, routers_[i].addr.y, out, false});
                if (auto& owner = routers_[i].owner(out))
                    routers_[i].input(*owner)->header_in_flight = false;
            }
        }
    }
    for (int node = 0; node < n; ++node) {
        Link& link = local_in_links_[node];
        if (link.idle()) continue;
        InputPort* dst = routers_[node].input(Port::Local);
        bool space = pre_counts[buffer_slot(node, Port::Local)] < dst->buffer.capacity();
        auto f = link.try_deliver(now_, space);
        if (!f) continue;
        if (!dst->buffer.push(*f) && audit_errors_.size() < 100)
            audit_errors_.push_back("cycle " + std::to_string(now_) +
                                    ": local buffer overflow at router " +
                                    to_string(routers_[node].addr));
        ++routers_[node].accepted_flits;
        if (cfg_.record_flit_events)
            flit_events_.push_back(
                FlitEvent{now_, routers_[node].addr.x, routers_[node].addr.y, Port::Local, true});
    }
}

std::uint64_t Mesh::in_flight_flits() const {
    std::uint64_t count = 0;
    for (int i = 0; i < node_count(); ++i) {
        for (Port p : kPortOrder) {
            const InputPort* ip = routers_[i].input(p);
            if (ip) count += ip->buffer.size();
            const Link* link = out_link(i, p);
            if (link && link->busy()) ++count;
        }
        if (local_in_links_[i].busy()) ++count;
    }
    return count;
}

void Mesh::run_audit() {
    if (audit_errors_.size() >= 100) return;
    std::uint64_t accounted = delivered_flits_total_ + in_flight_flits();
    if (accounted != injected_flits_)
        audit_errors_.push_back("cycle " + std::to_string(now_) + ": flit conservation broken: " +
                                std::to_string(injected_flits_) + " injected vs " +
                                std::to_string(accounted) + " accounted");
}

void Mesh::cycle() {
    // Start-of-cycle buffer occupancy; link deliveries are gated on it so a
    // slot freed this cycle is usable only from the next (synchronous
    // buffers, which is what bounds each link at one flit per two cycles).
    std::vector<std::uint8_t> pre_counts(static_cast<std::size_t>(node_count()) * kPortCount, 0);
    for (int i = 0; i < node_count(); ++i)
        for (Port p : kPortOrder) {
            const InputPort* ip = routers_[i].input(p);
            if (ip)
                pre_counts[i * kPortCount + static_cast<int>(p)] =
                    static_cast<std::uint8_t>(ip->buffer.size());
        }

    for (int i = 0; i < node_count(); ++i) compute_router(i);
    inject_locals();
    deliver_links(pre_counts);
    if (cfg_.audit) run_audit();
    for (int node = 0; node < node_count(); ++node) endpoints_[node]->on_cycle(now_);
    ++now_;
}

std::vector<std::string> Mesh::stuck_report() const {
    std::map<PacketId, std::vector<std::string>> sites;
    for (int i = 0; i < node_count(); ++i) {
        for (Port p : kPortOrder) {
            const InputPort* ip = routers_[i].input(p);
            if (ip)
                ip->buffer.for_each([&](const TaggedFlit& f) {
                    sites[f.packet].push_back(std::string(to_string(p)) + " buffer of router " +
                                              to_string(routers_[i].addr));
                });
            const Link* link = out_link(i, p);
            if (link && link->busy())
                sites[link->in_flight()->packet].push_back(std::string("link ") +
                                                           to_string(routers_[i].addr) + " " +
                                                           to_string(p));
        }
        if (local_in_links_[i].busy())
            sites[local_in_links_[i].in_flight()->packet].push_back(
                "injection link into router " + to_string(routers_[i].addr));
    }
    std::vector<std::string> report;
    for (auto& [id, where] : sites) {
        const PacketRecord* rec = packet(id);
        std::ostringstream line;
        line << "packet " << id;
        if (rec)
            line << " " << to_string(rec->src) << "->" << to_string(rec->dst) << " size "
                 << rec->size_flits;
        line << " stuck at:";
        for (auto& w : where) line << " [" << w << "]";
        report.push_back(line.str());
    }
    return report;
}

} // namespace multinoc::noc
