// SPDX-License-Identifier: Apache-2.0
#include "multinoc/ips/processor_ip.hpp"

#include "multinoc/error.hpp"

namespace multinoc::ips {

namespace {

// Core-side port of the tile's memory bank.  Always serviced in the cycle it
// is issued; the network port yields.
class ProcView final : public r8::CoreMemory {
public:
    explicit ProcView(MemoryBank& bank) : bank_(bank) {}
    std::uint16_t read(std::uint16_t offset) override { return bank_.proc_read(offset); }
    void write(std::uint16_t offset, std::uint16_t value) override {
        bank_.proc_write(offset, value);
    }

private:
    MemoryBank& bank_;
};

constexpr int kReleaseToken = 1;

} // namespace

ProcessorIp::Config ProcessorIp::config_for(const services::CoreMap& map, int core) {
    Config cfg;
    cfg.core = core;
    cfg.map = map;
    auto procs = map.processors();
    if (procs.size() == 2) {
        cfg.partner = (procs[0] == core) ? procs[1] : procs[0];
    }
    auto mems = map.memories();
    if (!mems.empty()) cfg.remote_memory = mems.front();
    cfg.serial = map.serial_core();
    return cfg;
}

ProcessorIp::ProcessorIp(Config cfg) : cfg_(std::move(cfg)) {
    cfg_.map.info(cfg_.core); // validates the core id
    if (cfg_.map.role_of(cfg_.core) != services::NodeRole::Processor) {
        throw ConfigError("processor adapter attached to a non-processor core");
    }
    core_.halted = true; // nothing runs until an activation arrives
}

void ProcessorIp::load_image(const r8::ObjectImage& image) {
    std::uint16_t addr = static_cast<std::uint16_t>(image.origin);
    for (std::uint16_t w : image.words) bank_.poke(addr++, w);
}

void ProcessorIp::halt_with(noc::Cycle now, const std::string& why) {
    core_.halted = true;
    core_.stalled = false;
    txn_ = Txn{};
    diag(now, why);
}

void ProcessorIp::send_service(int target_core, const services::ServiceMessage& m,
                               bool releases_core, noc::Cycle now) {
    const auto dst = cfg_.map.address_of(target_core);
    queue_packet(services::make_service_packet(dst, m), releases_core ? kReleaseToken : 0);
    (void)now;
}

void ProcessorIp::apply_effect(const r8::MemEffect& e, noc::Cycle now) {
    using services::ServiceKind;
    using services::ServiceMessage;
    if (e.kind == r8::MemEffect::Kind::None) return;
    const bool is_load = e.kind == r8::MemEffect::Kind::Load;
    const DecodedAddress dec = decode_address(e.address);
    switch (dec.target) {
    case AddressTarget::Local:
        if (is_load) {
            r8::retire_load(core_, e.reg, bank_.proc_read(dec.offset));
        } else {
            bank_.proc_write(dec.offset, e.value);
        }
        return;
    case AddressTarget::OtherProcessor:
    case AddressTarget::RemoteMemory: {
        const bool other = dec.target == AddressTarget::OtherProcessor;
        const std::optional<int> target = other ? cfg_.partner : cfg_.remote_memory;
        if (!target) {
            halt_with(now, other ? "no partner processor configured for the shared window"
                                 : "no memory core configured for the remote window");
            return;
        }
        ServiceMessage m;
        m.address = dec.offset;
        if (is_load) {
            m.kind = ServiceKind::ReadMem;
            m.source = static_cast<std::uint8_t>(cfg_.core);
            m.count = 1;
            txn_.kind = Txn::Kind::RemoteRead;
            txn_.reg = e.reg;
            core_.stalled = true;
            send_service(*target, m, false, now);
        } else {
            m.kind = ServiceKind::WriteMem;
            m.words = {e.value};
            m.count = 1;
            txn_.kind = Txn::Kind::PostedStore;
            core_.stalled = true; // released once the packet is on the wire
            send_service(*target, m, true, now);
        }
        return;
    }
    case AddressTarget::Io: {
        if (!cfg_.serial) {
            halt_with(now, "no serial bridge configured for the I/O window");
            return;
        }
        ServiceMessage m;
        m.source = static_cast<std::uint8_t>(cfg_.core);
        if (is_load) {
            m.kind = ServiceKind::Scanf;
            txn_.kind = Txn::Kind::Scanf;
            txn_.reg = e.reg;
            core_.stalled = true;
            send_service(*cfg_.serial, m, false, now);
        } else {
            m.kind = ServiceKind::Printf;
            m.data = e.value;
            txn_.kind = Txn::Kind::PostedStore;
            core_.stalled = true;
            send_service(*cfg_.serial, m, true, now);
        }
        return;
    }
    case AddressTarget::Wait: {
        if (is_load) {
            halt_with(now, "load from the wait register");
            return;
        }
        const std::uint8_t who = static_cast<std::uint8_t>(e.value & 0xFF);
        if (notify_pending_[who]) {
            notify_pending_[who] = false; // already notified: continue at once
        } else {
            txn_.kind = Txn::Kind::WaitNotify;
            txn_.partner = who;
            core_.stalled = true;
        }
        return;
    }
    case AddressTarget::Notify: {
        if (is_load) {
            halt_with(now, "load from the notify register");
            return;
        }
        const int who = static_cast<int>(e.value & 0xFF);
        bool known = false;
        for (const auto& c : cfg_.map.cores()) known = known || c.core == who;
        if (!known) {
            halt_with(now, "notify aimed at an unknown core");
            return;
        }
        services::ServiceMessage m;
        m.kind = services::ServiceKind::Notify;
        m.source = static_cast<std::uint8_t>(cfg_.core);
        txn_.kind = Txn::Kind::PostedStore;
        core_.stalled = true;
        send_service(who, m, true, now);
        return;
    }
    case AddressTarget::Unmapped:
        halt_with(now, "access to an unmapped address");
        return;
    }
}

void ProcessorIp::handle_body(const std::vector<noc::Flit>& body, noc::Cycle now) {
    using services::ServiceKind;
    services::ServiceMessage m;
    try {
        m = services::decode_service(body);
    } catch (const ParseError& e) {
        diag(now, std::string("undecodable service packet: ") + e.what());
        return;
    }
    switch (m.kind) {
    case ServiceKind::Activate:
        core_ = r8::R8State{}; // fresh registers, pc = 0
        activated_ = true;
        txn_ = Txn{};
        cycles_left_ = 0;
        return;
    case ServiceKind::Notify: {
        if (txn_.kind == Txn::Kind::WaitNotify && txn_.partner == m.source) {
            txn_ = Txn{};
            core_.stalled = false;
            return;
        }
        if (notify_pending_[m.source]) {
            diag(now, "notification overrun: an earlier one from the same core is still pending");
            return;
        }
        notify_pending_[m.source] = true;
        return;
    }
    case ServiceKind::ReadMem: {
        if (static_cast<std::size_t>(m.address) + m.count > MemoryBank::kWords) {
            diag(now, "remote read beyond the end of local memory");
            return;
        }
        NocMemJob job;
        job.write = false;
        job.addr = m.address;
        job.count = m.count;
        job.source = m.source;
        jobs_.push_back(std::move(job));
        return;
    }
    case ServiceKind::WriteMem: {
        if (static_cast<std::size_t>(m.address) + m.count > MemoryBank::kWords) {
            diag(now, "remote write beyond the end of local memory");
            return;
        }
        NocMemJob job;
        job.write = true;
        job.addr = m.address;
        job.count = m.count;
        job.words = m.words;
        jobs_.push_back(std::move(job));
        return;
    }
    case ServiceKind::ReadReturn:
        if (txn_.kind != Txn::Kind::RemoteRead) {
            diag(now, "read reply with no remote read outstanding");
            return;
        }
        if (m.words.empty()) {
            diag(now, "read reply carried no data");
            return;
        }
        r8::retire_load(core_, txn_.reg, m.words.front());
        txn_ = Txn{};
        core_.stalled = false;
        return;
    case ServiceKind::ScanfReturn:
        if (txn_.kind != Txn::Kind::Scanf) {
            diag(now, "input reply with no input request outstanding");
            return;
        }
        r8::retire_load(core_, txn_.reg, m.data);
        txn_ = Txn{};
        core_.stalled = false;
        return;
    default:
        diag(now, std::string("service not handled by a processor tile: ") +
                      services::to_string(m.kind));
        return;
    }
}

void ProcessorIp::on_packet_injected(int token, noc::Cycle now) {
    (void)now;
    if (token == kReleaseToken && txn_.kind == Txn::Kind::PostedStore) {
        txn_ = Txn{};
        core_.stalled = false;
    }
}

void ProcessorIp::serve_jobs(noc::Cycle now) {
    if (jobs_.empty()) return;
    NocMemJob& job = jobs_.front();
    if (job.write) {
        if (!bank_.noc_write(static_cast<std::uint16_t>(job.addr + job.done),
                             job.words[job.done])) {
            return; // the core used the banks this cycle; retry next cycle
        }
        ++job.done;
        if (job.done == job.count) jobs_.pop_front();
        return;
    }
    auto v = bank_.noc_read(static_cast<std::uint16_t>(job.addr + job.done));
    if (!v) return;
    job.words.push_back(*v);
    ++job.done;
    if (job.done == job.count) {
        services::ServiceMessage reply;
        reply.kind = services::ServiceKind::ReadReturn;
        reply.address = job.addr;
        reply.count = job.count;
        reply.words = std::move(job.words);
        const int requester = job.source;
        jobs_.pop_front();
        bool known = false;
        for (const auto& c : cfg_.map.cores()) known = known || c.core == requester;
        if (!known) {
            diag(now, "remote read came from an unknown core; reply dropped");
            return;
        }
        send_service(requester, reply, false, now);
    }
}

void ProcessorIp::advance(noc::Cycle now) {
    bank_.begin_cycle();
    if (activated_ && !core_.halted && !core_.stalled) {
        if (cycles_left_ == 0) {
            ProcView view(bank_);
            try {
                r8::StepResult r = r8::step(core_, view);
                cycles_left_ = r.cycles;
                pending_ = r.effect;
                ++instructions_;
            } catch (const Error& e) {
                halt_with(now, std::string("core fault: ") + e.what());
            }
        }
        if (!core_.halted && cycles_left_ > 0) {
            --cycles_left_;
            if (cycles_left_ == 0) {
                apply_effect(pending_, now);
                pending_ = r8::MemEffect{};
            }
        }
    }
    serve_jobs(now);
}

IpActivity ProcessorIp::activity() const {
    if (tx_pending() || rx_pending() || !jobs_.empty()) return IpActivity::Running;
    switch (txn_.kind) {
    case Txn::Kind::RemoteRead:
    case Txn::Kind::PostedStore:
        return IpActivity::BlockedNetwork;
    case Txn::Kind::Scanf:
    case Txn::Kind::WaitNotify:
        // Progress depends on outside input (host data, or a partner the
        // host has yet to start), so a settled system may leave these parked.
        return IpActivity::BlockedHost;
    case Txn::Kind::None:
        break;
    }
    if (activated_ && !core_.halted) return IpActivity::Running;
    return IpActivity::Idle;
}

} // namespace multinoc::ips
