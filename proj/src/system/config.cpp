// SPDX-License-Identifier: Apache-2.0
#include "multinoc/system/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "multinoc/r8/core.hpp"

namespace multinoc::system {

using nlohmann::json;

namespace {

services::NodeRole role_from_string(const std::string& s) {
    if (s == "serial")
        return services::NodeRole::Serial;
    if (s == "processor")
        return services::NodeRole::Processor;
    if (s == "memory")
        return services::NodeRole::Memory;
    throw ConfigError("unknown core role '" + s + "'");
}

r8::ObjectImage image_from_json(const json& jc, const std::string& base_dir) {
    if (jc.contains("image")) {
        std::filesystem::path p = jc.at("image").get<std::string>();
        if (p.is_relative() && !base_dir.empty())
            p = std::filesystem::path(base_dir) / p;
        return r8::load_object_file(p.string());
    }
    r8::ObjectImage img;
    img.origin = jc.value("origin", 0);
    for (const auto& w : jc.at("words"))
        img.words.push_back(static_cast<std::uint16_t>(w.get<unsigned>()));
    return img;
}

} // namespace

void SystemConfig::validate() const {
    if (mesh.width != map.width() || mesh.height != map.height())
        throw ConfigError("core map dimensions disagree with the mesh");
    if (flit_bits != 8)
        throw ConfigError("the fabric carries 8-bit flits");
    if (serial_byte_interval < 1)
        throw ConfigError("serial byte interval must be at least 1 cycle");
    if (clock_hz == 0)
        throw ConfigError("clock rate must be non-zero");
    for (const auto& [core, partner] : partners) {
        if (map.role_of(core) != services::NodeRole::Processor ||
            map.role_of(partner) != services::NodeRole::Processor)
            throw ConfigError("partner pairing names a non-processor core");
        if (core == partner)
            throw ConfigError("a core cannot partner with itself");
    }
    for (const auto& [core, img] : images) {
        auto role = map.role_of(core); // throws on unknown core
        if (role == services::NodeRole::Serial)
            throw ConfigError("the serial bridge has no memory to load an image into");
        if (img.origin + img.words.size() > r8::kLocalWords)
            throw ConfigError("boot image overflows the 1024-word local memory");
    }
    for (const auto& [core, words] : memory_init) {
        if (map.role_of(core) == services::NodeRole::Serial)
            throw ConfigError("the serial bridge has no memory to initialise");
        for (const auto& [offset, value] : words) {
            (void)value;
            if (offset >= r8::kLocalWords)
                throw ConfigError("memory initialiser offset outside the 1024-word bank");
        }
    }
}

SystemConfig parse_system_config(const std::string& json_text, const std::string& base_dir) {
    json j = json::parse(json_text);
    SystemConfig cfg;
    if (j.contains("mesh")) {
        const json& m = j.at("mesh");
        cfg.mesh.width = m.value("width", cfg.mesh.width);
        cfg.mesh.height = m.value("height", cfg.mesh.height);
        cfg.mesh.buffer_depth = m.value("buffer_depth", cfg.mesh.buffer_depth);
        cfg.mesh.routing_cycles = m.value("routing_cycles", cfg.mesh.routing_cycles);
    }
    cfg.mesh.record_flit_events = j.value("record_flit_events", cfg.mesh.record_flit_events);
    cfg.mesh.audit = j.value("audit", cfg.mesh.audit);
    cfg.flit_bits = j.value("flit_bits", cfg.flit_bits);
    cfg.clock_hz = j.value("clock_hz", cfg.clock_hz);
    cfg.serial_byte_interval = j.value("serial_byte_interval", cfg.serial_byte_interval);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.max_cycles = j.value("max_cycles", cfg.max_cycles);

    if (j.contains("cores")) {
        std::vector<services::CoreInfo> cores;
        for (const auto& jc : j.at("cores")) {
            services::CoreInfo info;
            info.core = jc.at("core").get<int>();
            info.addr.x = static_cast<std::uint8_t>(jc.at("x").get<unsigned>());
            info.addr.y = static_cast<std::uint8_t>(jc.at("y").get<unsigned>());
            info.role = role_from_string(jc.at("role").get<std::string>());
            info.name = jc.value("name", std::string{});
            cores.push_back(info);
        }
        cfg.map = services::CoreMap(cfg.mesh.width, cfg.mesh.height, std::move(cores));
        for (const auto& jc : j.at("cores")) {
            int core = jc.at("core").get<int>();
            if (jc.contains("partner"))
                cfg.partners[core] = jc.at("partner").get<int>();
            if (jc.contains("image") || jc.contains("words"))
                cfg.images[core] = image_from_json(jc, base_dir);
        }
    }
    if (j.contains("memory_init")) {
        for (const auto& [key, rows] : j.at("memory_init").items()) {
            int core = std::stoi(key);
            auto& dst = cfg.memory_init[core];
            for (const auto& row : rows)
                dst.emplace_back(static_cast<std::uint16_t>(row.at(0).get<unsigned>()),
                                 static_cast<std::uint16_t>(row.at(1).get<unsigned>()));
        }
    }
    cfg.validate();
    return cfg;
}

SystemConfig load_system_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_system_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

std::string format_system_config(const SystemConfig& cfg) {
    json j;
    j["mesh"] = {{"width", cfg.mesh.width},
                 {"height", cfg.mesh.height},
                 {"buffer_depth", cfg.mesh.buffer_depth},
                 {"routing_cycles", cfg.mesh.routing_cycles}};
    j["record_flit_events"] = cfg.mesh.record_flit_events;
    j["audit"] = cfg.mesh.audit;
    j["flit_bits"] = cfg.flit_bits;
    j["clock_hz"] = cfg.clock_hz;
    j["serial_byte_interval"] = cfg.serial_byte_interval;
    j["seed"] = cfg.seed;
    j["max_cycles"] = cfg.max_cycles;
    json cores = json::array();
    for (const auto& info : cfg.map.cores()) {
        json jc = {{"core", info.core},
                   {"x", info.addr.x},
                   {"y", info.addr.y},
                   {"role", services::to_string(info.role)}};
        if (!info.name.empty())
            jc["name"] = info.name;
        if (auto it = cfg.partners.find(info.core); it != cfg.partners.end())
            jc["partner"] = it->second;
        if (auto it = cfg.images.find(info.core); it != cfg.images.end()) {
            jc["origin"] = it->second.origin;
            jc["words"] = it->second.words;
        }
        cores.push_back(jc);
    }
    j["cores"] = cores;
    if (!cfg.memory_init.empty()) {
        json mi = json::object();
        for (const auto& [core, rows] : cfg.memory_init) {
            json arr = json::array();
            for (const auto& [offset, value] : rows)
                arr.push_back(json::array({offset, value}));
            mi[std::to_string(core)] = arr;
        }
        j["memory_init"] = mi;
    }
    return j.dump(2) + "\n";
}

void save_system_config(const SystemConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write config file: " + path);
    out << format_system_config(cfg);
}

} // namespace multinoc::system
