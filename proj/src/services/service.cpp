// SPDX-License-Identifier: Apache-2.0
#include "multinoc/services/service.hpp"

#include <string>

namespace multinoc::services {

using noc::Flit;

const char* to_string(ServiceKind k) {
    switch (k) {
    case ServiceKind::ReadMem: return "read_mem";
    case ServiceKind::ReadReturn: return "read_return";
    case ServiceKind::WriteMem: return "write_mem";
    case ServiceKind::Activate: return "activate";
    case ServiceKind::Printf: return "printf";
    case ServiceKind::Scanf: return "scanf";
    case ServiceKind::ScanfReturn: return "scanf_return";
    case ServiceKind::Notify: return "notify";
    case ServiceKind::Wait: return "wait";
    }
    return "?";
}

namespace {

void push_word(std::vector<Flit>& out, std::uint16_t w) {
    out.push_back(static_cast<Flit>(w >> 8));
    out.push_back(static_cast<Flit>(w & 0xFF));
}

void check_word_count(std::size_t n, const char* what) {
    if (n < 1 || n > static_cast<std::size_t>(kMaxServiceWords))
        throw DomainError(std::string(what) + " must carry 1.." +
                          std::to_string(kMaxServiceWords) + " words, got " + std::to_string(n));
}

} // namespace

std::vector<Flit> encode_service(const ServiceMessage& m) {
    std::vector<Flit> out;
    out.push_back(static_cast<Flit>(m.kind));
    switch (m.kind) {
    case ServiceKind::ReadMem:
        check_word_count(m.count, "a memory read");
        out.push_back(m.source);
        push_word(out, m.address);
        out.push_back(m.count);
        break;
    case ServiceKind::ReadReturn:
    case ServiceKind::WriteMem:
        check_word_count(m.words.size(),
                         m.kind == ServiceKind::ReadReturn ? "a read reply" : "a memory write");
        if (m.count != 0 && m.count != m.words.size())
            throw DomainError("word count disagrees with the data carried");
        push_word(out, m.address);
        out.push_back(static_cast<Flit>(m.words.size()));
        for (std::uint16_t w : m.words) push_word(out, w);
        break;
    case ServiceKind::Activate:
        break;
    case ServiceKind::Printf:
        out.push_back(m.source);
        push_word(out, m.data);
        break;
    case ServiceKind::Scanf:
        out.push_back(m.source);
        break;
    case ServiceKind::ScanfReturn:
        push_word(out, m.data);
        break;
    case ServiceKind::Notify:
        out.push_back(m.source);
        break;
    case ServiceKind::Wait:
        throw DomainError("wait is processor-local and cannot be sent");
    }
    return out;
}

ServiceMessage decode_service(const std::vector<Flit>& body) {
    if (body.empty()) throw ParseError("empty service body");
    auto need = [&](std::size_t n) {
        if (body.size() != n)
            throw ParseError("service body of kind " + std::to_string(body[0]) + " needs " +
                                 std::to_string(n) + " flits, got " + std::to_string(body.size()),
                             static_cast<long>(body.size()));
    };
    auto word_at = [&](std::size_t i) {
        return static_cast<std::uint16_t>((body[i] << 8) | body[i + 1]);
    };

    ServiceMessage m;
    m.kind = static_cast<ServiceKind>(body[0]);
    switch (m.kind) {
    case ServiceKind::ReadMem:
        need(5);
        m.source = body[1];
        m.address = word_at(2);
        m.count = body[4];
        if (m.count < 1 || m.count > kMaxServiceWords)
            throw ParseError("memory read word count out of range", 4);
        break;
    case ServiceKind::ReadReturn:
    case ServiceKind::WriteMem: {
        if (body.size() < 4) throw ParseError("truncated memory service body");
        m.address = word_at(1);
        m.count = body[3];
        if (m.count < 1 || m.count > kMaxServiceWords)
            throw ParseError("memory word count out of range", 3);
        need(4 + 2 * static_cast<std::size_t>(m.count));
        for (int i = 0; i < m.count; ++i) m.words.push_back(word_at(4 + 2 * i));
        break;
    }
    case ServiceKind::Activate:
        need(1);
        break;
    case ServiceKind::Printf:
        need(4);
        m.source = body[1];
        m.data = word_at(2);
        break;
    case ServiceKind::Scanf:
        need(2);
        m.source = body[1];
        break;
    case ServiceKind::ScanfReturn:
        need(3);
        m.data = word_at(1);
        break;
    case ServiceKind::Notify:
        need(2);
        m.source = body[1];
        break;
    default:
        throw ParseError("unknown service kind " + std::to_string(body[0]), 0);
    }
    return m;
}

std::vector<Flit> make_service_packet(noc::NetAddress dst, const ServiceMessage& m) {
    std::vector<Flit> body = encode_service(m);
    std::vector<Flit> pkt;
    pkt.reserve(body.size() + 2);
    pkt.push_back(dst.packed());
    pkt.push_back(static_cast<Flit>(body.size()));
    pkt.insert(pkt.end(), body.begin(), body.end());
    return pkt;
}

} // namespace multinoc::services
