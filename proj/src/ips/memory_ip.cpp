// SPDX-License-Identifier: Apache-2.0
#include "multinoc/ips/memory_ip.hpp"

#include "multinoc/error.hpp"

namespace multinoc::ips {

MemoryIp::MemoryIp(int core, services::CoreMap map) : core_(core), map_(std::move(map)) {
    map_.info(core_);
    if (map_.role_of(core_) != services::NodeRole::Memory) {
        throw ConfigError("memory adapter attached to a non-memory core");
    }
}

void MemoryIp::load_image(const r8::ObjectImage& image) {
    std::uint16_t addr = static_cast<std::uint16_t>(image.origin);
    for (std::uint16_t w : image.words) bank_.poke(addr++, w);
}

void MemoryIp::handle_body(const std::vector<noc::Flit>& body, noc::Cycle now) {
    using services::ServiceKind;
    services::ServiceMessage m;
    try {
        m = services::decode_service(body);
    } catch (const ParseError& e) {
        diag(now, std::string("undecodable service packet: ") + e.what());
        return;
    }
    if (m.kind != ServiceKind::ReadMem && m.kind != ServiceKind::WriteMem) {
        diag(now, std::string("service not handled by a memory tile: ") +
                      services::to_string(m.kind));
        return;
    }
    if (static_cast<std::size_t>(m.address) + m.count > MemoryBank::kWords) {
        diag(now, "request beyond the end of the bank");
        return;
    }
    NocMemJob job;
    job.write = m.kind == ServiceKind::WriteMem;
    job.addr = m.address;
    job.count = m.count;
    job.source = m.source;
    job.words = std::move(m.words);
    jobs_.push_back(std::move(job));
}

void MemoryIp::advance(noc::Cycle now) {
    bank_.begin_cycle(); // no processor side: the network port is always free
    if (jobs_.empty()) return;
    NocMemJob& job = jobs_.front();
    if (job.write) {
        bank_.noc_write(static_cast<std::uint16_t>(job.addr + job.done), job.words[job.done]);
        ++job.done;
        if (job.done == job.count) jobs_.pop_front();
        return;
    }
    auto v = bank_.noc_read(static_cast<std::uint16_t>(job.addr + job.done));
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
        for (const auto& c : map_.cores()) known = known || c.core == requester;
        if (!known) {
            diag(now, "read came from an unknown core; reply dropped");
            return;
        }
        queue_packet(services::make_service_packet(map_.address_of(requester), reply));
    }
}

IpActivity MemoryIp::activity() const {
    if (tx_pending() || rx_pending() || !jobs_.empty()) return IpActivity::Running;
    return IpActivity::Idle;
}

} // namespace multinoc::ips
