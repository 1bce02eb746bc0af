// SPDX-License-Identifier: Apache-2.0
#include "multinoc/services/core_map.hpp"

namespace multinoc::services {

const char* to_string(NodeRole r) {
    switch (r) {
    case NodeRole::Serial: return "serial";
    case NodeRole::Processor: return "processor";
    case NodeRole::Memory: return "memory";
    }
    return "?";
}

CoreMap::CoreMap(int width, int height, std::vector<CoreInfo> cores)
    : width_(width), height_(height), cores_(std::move(cores)) {
    if (width_ < 1 || height_ < 1 || width_ > noc::kMaxMeshDim || height_ > noc::kMaxMeshDim)
        throw ConfigError("core map dimensions must be within 1x1 .. 16x16");
    if (cores_.empty()) throw ConfigError("core map needs at least one core");
    int serials = 0;
    for (std::size_t i = 0; i < cores_.size(); ++i) {
        CoreInfo& c = cores_[i];
        if (c.core != static_cast<int>(i))
            throw ConfigError("core ids must be dense from 0; core " + std::to_string(c.core) +
                              " at position " + std::to_string(i));
        if (c.addr.x >= width_ || c.addr.y >= height_)
            throw ConfigError("core " + std::to_string(c.core) + " placed outside the mesh at " +
                              noc::to_string(c.addr));
        for (std::size_t j = 0; j < i; ++j)
            if (cores_[j].addr == c.addr)
                throw ConfigError("cores " + std::to_string(cores_[j].core) + " and " +
                                  std::to_string(c.core) + " share position " +
                                  noc::to_string(c.addr));
        if (c.role == NodeRole::Serial) ++serials;
        if (c.name.empty()) c.name = std::string(to_string(c.role)) + std::to_string(c.core);
    }
    if (serials > 1) throw ConfigError("at most one serial bridge per platform");
}

CoreMap CoreMap::standard() {
    return CoreMap(2, 2,
                   {
                       {0, {0, 0}, NodeRole::Serial, "serial"},
                       {1, {1, 0}, NodeRole::Processor, "proc1"},
                       {2, {0, 1}, NodeRole::Processor, "proc2"},
                       {3, {1, 1}, NodeRole::Memory, "mem"},
                   });
}

const CoreInfo& CoreMap::info(int core) const {
    if (core < 0 || core >= count())
        throw DomainError("no core " + std::to_string(core) + " in the platform");
    return cores_[static_cast<std::size_t>(core)];
}

std::optional<int> CoreMap::core_at(noc::NetAddress addr) const {
    for (const CoreInfo& c : cores_)
        if (c.addr == addr) return c.core;
    return std::nullopt;
}

std::optional<int> CoreMap::serial_core() const {
    for (const CoreInfo& c : cores_)
        if (c.role == NodeRole::Serial) return c.core;
    return std::nullopt;
}

std::vector<int> CoreMap::processors() const {
    std::vector<int> out;
    for (const CoreInfo& c : cores_)
        if (c.role == NodeRole::Processor) out.push_back(c.core);
    return out;
}

std::vector<int> CoreMap::memories() const {
    std::vector<int> out;
    for (const CoreInfo& c : cores_)
        if (c.role == NodeRole::Memory) out.push_back(c.core);
    return out;
}

} // namespace multinoc::services
