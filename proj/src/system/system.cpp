// SPDX-License-Identifier: Apache-2.0
#include "multinoc/system/system.hpp"

#include <algorithm>
#include <cstdio>

#include "multinoc/noc/routing.hpp"

namespace multinoc::system {

using services::NodeRole;

namespace {

std::string addr_str(noc::NetAddress a) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u:%u", a.x, a.y);
    return buf;
}

} // namespace

System::System(SystemConfig cfg) : cfg_(std::move(cfg)), mesh_(cfg_.mesh) {
    cfg_.validate();
    for (const auto& info : cfg_.map.cores()) {
        std::unique_ptr<ips::IpEndpoint> ep;
        switch (info.role) {
        case NodeRole::Serial: {
            ips::SerialIp::Config sc;
            sc.core = info.core;
            sc.map = cfg_.map;
            sc.byte_interval = cfg_.serial_byte_interval;
            auto ser = std::make_unique<ips::SerialIp>(sc);
            serial_ = ser.get();
            ep = std::move(ser);
            break;
        }
        case NodeRole::Processor: {
            auto pc = ips::ProcessorIp::config_for(cfg_.map, info.core);
            if (auto it = cfg_.partners.find(info.core); it != cfg_.partners.end())
                pc.partner = it->second;
            auto proc = std::make_unique<ips::ProcessorIp>(pc);
            procs_[info.core] = proc.get();
            ep = std::move(proc);
            break;
        }
        case NodeRole::Memory: {
            auto mem = std::make_unique<ips::MemoryIp>(info.core, cfg_.map);
            mems_[info.core] = mem.get();
            ep = std::move(mem);
            break;
        }
        }
        mesh_.set_endpoint(mesh_.node_index(info.addr), ep.get());
        by_core_[info.core] = ep.get();
        owned_.push_back(std::move(ep));
        if (info.role == NodeRole::Processor)
            snaps_[info.core] = CoreSnap{};
        seen_diags_[info.core] = 0;
    }
    for (const auto& [core, img] : cfg_.images) {
        if (auto it = procs_.find(core); it != procs_.end())
            it->second->load_image(img);
        else
            mems_.at(core)->load_image(img);
    }
    for (const auto& [core, rows] : cfg_.memory_init) {
        ips::MemoryBank& bank = procs_.count(core) ? procs_.at(core)->memory()
                                                   : mems_.at(core)->bank();
        for (const auto& [offset, value] : rows)
            bank.poke(offset, value);
    }
}

ips::ProcessorIp& System::processor(int core) {
    auto it = procs_.find(core);
    if (it == procs_.end())
        throw DomainError("core " + std::to_string(core) + " is not a processor");
    return *it->second;
}

ips::MemoryIp& System::memory_ip(int core) {
    auto it = mems_.find(core);
    if (it == mems_.end())
        throw DomainError("core " + std::to_string(core) + " is not a memory tile");
    return *it->second;
}

void System::host_send(const std::vector<std::uint8_t>& bytes) {
    if (!serial_)
        throw DomainError("this platform has no serial bridge");
    serial_->host_send(bytes);
    host_shadow_.insert(host_shadow_.end(), bytes.begin(), bytes.end());
}

std::vector<std::uint8_t> System::host_take() {
    std::vector<std::uint8_t> out;
    out.swap(host_out_);
    return out;
}

void System::cycle() {
    mesh_.cycle();
    capture();
}

void System::capture() {
    const noc::Cycle at = mesh_.now() - 1; // the cycle that just executed
    char buf[128];

    const auto& records = mesh_.packets();
    for (; seen_records_ < records.size(); ++seen_records_) {
        const auto& r = records[seen_records_];
        // The wire length is still streaming in when the header injects; the
        // deliver event and the packet table carry the final size.
        std::snprintf(buf, sizeof buf, "id=%llu src=%s dst=%s",
                      static_cast<unsigned long long>(r.id), addr_str(r.src).c_str(),
                      addr_str(r.dst).c_str());
        trace_.log(r.inject_cycle, "inject", buf);
        outstanding_.push_back(r.id);
    }
    for (std::size_t i = 0; i < outstanding_.size();) {
        const noc::PacketRecord* r = mesh_.packet(outstanding_[i]);
        if (!r || !r->delivered()) {
            ++i;
            continue;
        }
        auto measured = r->deliver_cycle - r->inject_cycle;
        auto floor = noc::min_latency(r->hops, static_cast<int>(r->size_flits),
                                      cfg_.mesh.routing_cycles);
        std::snprintf(buf, sizeof buf, "id=%llu hops=%d size=%u latency=%llu floor=%llu gap=%llu",
                      static_cast<unsigned long long>(r->id), r->hops, r->size_flits,
                      static_cast<unsigned long long>(measured),
                      static_cast<unsigned long long>(floor),
                      static_cast<unsigned long long>(measured - floor));
        trace_.log(at, "deliver", buf);
        outstanding_.erase(outstanding_.begin() + static_cast<std::ptrdiff_t>(i));
    }

    for (auto& [core, snap] : snaps_) {
        const ips::ProcessorIp& p = *procs_.at(core);
        CoreSnap cur{p.activated(), p.core().halted, p.core().stalled};
        if (cur.activated != snap.activated && cur.activated) {
            std::snprintf(buf, sizeof buf, "core=%d state=activated", core);
            trace_.log(at, "core", buf);
        } else if (cur.halted != snap.halted && cur.halted) {
            std::snprintf(buf, sizeof buf, "core=%d state=halted", core);
            trace_.log(at, "core", buf);
        }
        if (cur.stalled != snap.stalled) {
            if (cur.stalled) {
                const char* why =
                    p.activity() == ips::IpActivity::BlockedHost ? "host" : "network";
                std::snprintf(buf, sizeof buf, "core=%d state=blocked on=%s", core, why);
            } else {
                std::snprintf(buf, sizeof buf, "core=%d state=resumed", core);
            }
            trace_.log(at, "core", buf);
        }
        snap = cur;
    }

    if (serial_) {
        std::size_t backlog = serial_->host_backlog();
        while (host_shadow_.size() > backlog) {
            std::snprintf(buf, sizeof buf, "byte=0x%02X", host_shadow_.front());
            trace_.log(at, "host_rx", buf);
            host_shadow_.pop_front();
        }
        for (std::uint8_t b : serial_->host_take()) {
            std::snprintf(buf, sizeof buf, "byte=0x%02X", b);
            trace_.log(at, "host_tx", buf);
            host_out_.push_back(b);
        }
    }

    for (auto& [core, seen] : seen_diags_) {
        const auto& diags = by_core_.at(core)->diagnostics();
        for (; seen < diags.size(); ++seen)
            trace_.log(at, "diag", "core=" + std::to_string(core) + " msg=" + diags[seen]);
    }
}

bool System::quiescent() const {
    if (!mesh_.idle() || mesh_.undelivered_count() != 0)
        return false;
    for (const auto& [core, ep] : by_core_) {
        auto a = ep->activity();
        if (a == ips::IpActivity::Running || a == ips::IpActivity::BlockedNetwork)
            return false;
    }
    return true;
}

bool System::stuck() const {
    if (!mesh_.idle())
        return false;
    // An empty fabric with an undelivered packet is a wedged connection: the
    // missing flits can never arrive.
    bool waiting = mesh_.undelivered_count() != 0;
    for (const auto& [core, ep] : by_core_) {
        auto a = ep->activity();
        if (a == ips::IpActivity::Running)
            return false;
        if (a == ips::IpActivity::BlockedNetwork)
            waiting = true;
    }
    return waiting;
}

std::string System::blocked_report() const {
    std::string out;
    for (const auto& [core, ep] : by_core_) {
        switch (ep->activity()) {
        case ips::IpActivity::BlockedNetwork:
            out += "core " + std::to_string(core) + " waits on the network\n";
            break;
        case ips::IpActivity::BlockedHost:
            out += "core " + std::to_string(core) + " waits on the host\n";
            break;
        case ips::IpActivity::Running:
            out += "core " + std::to_string(core) + " still running\n";
            break;
        case ips::IpActivity::Idle: break;
        }
    }
    return out;
}

RunResult System::run(std::uint64_t budget) {
    if (budget == 0)
        budget = cfg_.max_cycles;
    RunResult res;
    for (; res.cycles < budget; ++res.cycles) {
        if (quiescent()) {
            res.quiescent = true;
            return res;
        }
        if (stuck()) {
            res.deadlock = true;
            res.diagnostic =
                "no progress possible: the network is empty but work still waits on it\n" +
                blocked_report();
            char buf[128];
            for (const auto& r : mesh_.packets()) {
                if (r.delivered())
                    continue;
                std::snprintf(buf, sizeof buf,
                              "packet %llu %s -> %s stalled at %u of %u flits\n",
                              static_cast<unsigned long long>(r.id), addr_str(r.src).c_str(),
                              addr_str(r.dst).c_str(), r.delivered_flits, r.size_flits);
                res.diagnostic += buf;
            }
            trace_.log(mesh_.now(), "deadlock", "kind=starved");
            return res;
        }
        cycle();
    }
    res.quiescent = quiescent();
    if (!res.quiescent && !mesh_.idle()) {
        res.deadlock = true;
        res.diagnostic = "watchdog expired with " +
                         std::to_string(mesh_.in_flight_flits()) + " flits in flight\n";
        for (const auto& line : mesh_.stuck_report())
            res.diagnostic += line + "\n";
        res.diagnostic += blocked_report();
        trace_.log(mesh_.now(), "deadlock", "kind=watchdog");
    }
    return res;
}

const SimTrace& System::finalize_trace() {
    trace_.packets = mesh_.packets();
    trace_.final_memories.clear();
    for (const auto& [core, p] : procs_) {
        auto& words = trace_.final_memories[core];
        words.resize(r8::kLocalWords);
        for (std::size_t a = 0; a < words.size(); ++a)
            words[a] = p->memory().peek(static_cast<std::uint16_t>(a));
    }
    for (const auto& [core, m] : mems_) {
        auto& words = trace_.final_memories[core];
        words.resize(r8::kLocalWords);
        for (std::size_t a = 0; a < words.size(); ++a)
            words[a] = m->bank().peek(static_cast<std::uint16_t>(a));
    }
    return trace_;
}

} // namespace multinoc::system
