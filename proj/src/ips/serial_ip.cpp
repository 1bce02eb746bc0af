// SPDX-License-Identifier: Apache-2.0
#include "multinoc/ips/serial_ip.hpp"

#include "multinoc/error.hpp"
#include "multinoc/ips/memory_bank.hpp"
#include "multinoc/services/service.hpp"

namespace multinoc::ips {

namespace sf = serial_frames;

SerialIp::SerialIp(Config cfg) : cfg_(std::move(cfg)) {
    cfg_.map.info(cfg_.core);
    if (cfg_.map.role_of(cfg_.core) != services::NodeRole::Serial) {
        throw ConfigError("serial adapter attached to a non-serial core");
    }
    if (cfg_.byte_interval < 1) throw ConfigError("byte interval must be at least 1 cycle");
}

void SerialIp::host_send(const std::vector<std::uint8_t>& bytes) {
    from_host_.insert(from_host_.end(), bytes.begin(), bytes.end());
}

std::vector<std::uint8_t> SerialIp::host_take() {
    std::vector<std::uint8_t> out(to_host_.begin(), to_host_.end());
    to_host_.clear();
    return out;
}

void SerialIp::emit(std::vector<std::uint8_t> bytes) {
    staged_.insert(staged_.end(), bytes.begin(), bytes.end());
}

bool SerialIp::core_usable(int core, bool wants_memory) const {
    for (const auto& c : cfg_.map.cores()) {
        if (c.core != core) continue;
        if (c.role == services::NodeRole::Processor) return true;
        // Memory tiles hold data but never run programs or answer input.
        return wants_memory && c.role == services::NodeRole::Memory;
    }
    return false;
}

void SerialIp::consume_byte(std::uint8_t b, noc::Cycle now) {
    if (!synced_) {
        if (b == sf::kSync) synced_ = true; // hunt until the opening sync
        return;
    }
    if (frame_.empty() && b == sf::kSync) return; // repeated sync: harmless
    frame_.push_back(b);
    std::size_t need = 0;
    switch (frame_[0]) {
    case sf::kRead:
        need = 5;
        break;
    case sf::kWrite:
        if (frame_.size() < 3) return; // length depends on the count byte
        need = 5 + 2 * static_cast<std::size_t>(frame_[2]);
        break;
    case sf::kActivate:
        need = 2;
        break;
    case sf::kInputReply:
        need = 4;
        break;
    default:
        emit({sf::kError, sf::kErrUnknownOpcode, frame_[0]});
        frame_.clear();
        return;
    }
    if (frame_.size() < need) return;
    complete_frame(now);
    frame_.clear();
}

void SerialIp::complete_frame(noc::Cycle now) {
    (void)now;
    using services::ServiceKind;
    using services::ServiceMessage;
    const std::uint8_t op = frame_[0];
    const int core = frame_[1];
    switch (op) {
    case sf::kRead:
    case sf::kWrite: {
        if (!core_usable(core, true)) {
            emit({sf::kError, sf::kErrUnknownCore, static_cast<std::uint8_t>(core)});
            return;
        }
        const std::uint8_t count = frame_[2];
        const std::uint16_t addr =
            static_cast<std::uint16_t>((frame_[3] << 8) | frame_[4]);
        if (count == 0 || count > services::kMaxServiceWords ||
            static_cast<std::size_t>(addr) + count > MemoryBank::kWords) {
            emit({sf::kError, sf::kErrBadCount, count});
            return;
        }
        ServiceMessage m;
        m.address = addr;
        m.count = count;
        if (op == sf::kRead) {
            m.kind = ServiceKind::ReadMem;
            m.source = static_cast<std::uint8_t>(cfg_.core);
            outstanding_reads_.push_back(core);
        } else {
            m.kind = ServiceKind::WriteMem;
            m.words.reserve(count);
            for (int i = 0; i < count; ++i) {
                m.words.push_back(
                    static_cast<std::uint16_t>((frame_[5 + 2 * i] << 8) | frame_[6 + 2 * i]));
            }
        }
        queue_packet(services::make_service_packet(cfg_.map.address_of(core), m));
        return;
    }
    case sf::kActivate: {
        if (!core_usable(core, false)) {
            emit({sf::kError, sf::kErrUnknownCore, static_cast<std::uint8_t>(core)});
            return;
        }
        ServiceMessage m;
        m.kind = ServiceKind::Activate;
        queue_packet(services::make_service_packet(cfg_.map.address_of(core), m));
        return;
    }
    case sf::kInputReply: {
        if (!core_usable(core, false)) {
            emit({sf::kError, sf::kErrUnknownCore, static_cast<std::uint8_t>(core)});
            return;
        }
        ServiceMessage m;
        m.kind = ServiceKind::ScanfReturn;
        m.data = static_cast<std::uint16_t>((frame_[2] << 8) | frame_[3]);
        queue_packet(services::make_service_packet(cfg_.map.address_of(core), m));
        return;
    }
    default:
        return; // unreachable: unknown opcodes never reach completion
    }
}

void SerialIp::handle_body(const std::vector<noc::Flit>& body, noc::Cycle now) {
    using services::ServiceKind;
    services::ServiceMessage m;
    try {
        m = services::decode_service(body);
    } catch (const ParseError& e) {
        diag(now, std::string("undecodable service packet: ") + e.what());
        return;
    }
    switch (m.kind) {
    case ServiceKind::Printf:
        emit({sf::kPrintf, m.source, static_cast<std::uint8_t>(m.data >> 8),
              static_cast<std::uint8_t>(m.data & 0xFF)});
        return;
    case ServiceKind::Scanf:
        emit({sf::kScanf, m.source});
        return;
    case ServiceKind::ReadReturn: {
        if (outstanding_reads_.empty()) {
            diag(now, "read data arrived with no host read outstanding");
            return;
        }
        const int core = outstanding_reads_.front();
        outstanding_reads_.pop_front();
        std::vector<std::uint8_t> f{sf::kReadReturn, static_cast<std::uint8_t>(core),
                                    static_cast<std::uint8_t>(m.count),
                                    static_cast<std::uint8_t>(m.address >> 8),
                                    static_cast<std::uint8_t>(m.address & 0xFF)};
        for (std::uint16_t w : m.words) {
            f.push_back(static_cast<std::uint8_t>(w >> 8));
            f.push_back(static_cast<std::uint8_t>(w & 0xFF));
        }
        emit(std::move(f));
        return;
    }
    default:
        diag(now, std::string("service not handled by the serial bridge: ") +
                      services::to_string(m.kind));
        return;
    }
}

void SerialIp::advance(noc::Cycle now) {
    if (now >= next_rx_ && !from_host_.empty()) {
        const std::uint8_t b = from_host_.front();
        from_host_.pop_front();
        next_rx_ = now + static_cast<noc::Cycle>(cfg_.byte_interval);
        consume_byte(b, now);
    }
    if (now >= next_tx_ && !staged_.empty()) {
        to_host_.push_back(staged_.front());
        staged_.pop_front();
        next_tx_ = now + static_cast<noc::Cycle>(cfg_.byte_interval);
    }
}

IpActivity SerialIp::activity() const {
    if (tx_pending() || rx_pending() || !from_host_.empty() || !staged_.empty())
        return IpActivity::Running;
    if (!outstanding_reads_.empty()) return IpActivity::BlockedNetwork;
    if (!frame_.empty()) return IpActivity::BlockedHost; // mid-frame, host owes bytes
    return IpActivity::Idle;
}

} // namespace multinoc::ips
