// SPDX-License-Identifier: Apache-2.0
#include "multinoc/system/trace.hpp"

#include <cstdio>

namespace multinoc::system {

void SimTrace::log(noc::Cycle cycle, std::string kind, std::string detail) {
    events.push_back(TraceEvent{cycle, std::move(kind), std::move(detail)});
}

std::string SimTrace::text() const {
    std::string out;
    out.reserve(events.size() * 48);
    char buf[64];
    for (const auto& e : events) {
        std::snprintf(buf, sizeof buf, "cycle=%llu event=",
                      static_cast<unsigned long long>(e.cycle));
        out += buf;
        out += e.kind;
        if (!e.detail.empty()) {
            out += ' ';
            out += e.detail;
        }
        out += '\n';
    }
    for (const auto& [core, words] : final_memories) {
        std::snprintf(buf, sizeof buf, "final core=%d\n", core);
        out += buf;
        for (std::size_t a = 0; a < words.size(); ++a) {
            if (words[a] == 0)
                continue; // images are sparse; zero words carry no information
            std::snprintf(buf, sizeof buf, "mem core=%d addr=%04zX value=%04X\n", core, a,
                          words[a]);
            out += buf;
        }
    }
    return out;
}

std::string SimTrace::packets_csv() const {
    std::string out = "src,dst,size,inject,deliver,hops\n";
    char buf[96];
    for (const auto& p : packets) {
        std::snprintf(buf, sizeof buf, "%u:%u,%u:%u,%u,%llu,%llu,%d\n", p.src.x, p.src.y,
                      p.dst.x, p.dst.y, p.size_flits,
                      static_cast<unsigned long long>(p.inject_cycle),
                      static_cast<unsigned long long>(p.deliver_cycle), p.hops);
        out += buf;
    }
    return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t SimTrace::hash() const { return fnv1a(text()); }

} // namespace multinoc::system
