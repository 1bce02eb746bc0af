// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "multinoc/error.hpp"
#include "multinoc/noc/mesh.hpp"
#include "multinoc/r8/object.hpp"
#include "multinoc/services/core_map.hpp"

namespace multinoc::system {

// Everything that defines a platform instance. Two equal configs produce
// bit-for-bit identical runs; clock_hz only scales reported units and never
// changes behaviour.
struct SystemConfig {
    noc::MeshConfig mesh{};                  // dims, buffers, routing cycles
    int flit_bits = 8;                       // fabric wire width (fixed by the NoC)
    std::uint64_t clock_hz = 50'000'000;     // reporting units only
    int serial_byte_interval = 1;            // cycles per serial-line byte
    std::uint64_t seed = 1;                  // synthetic-traffic RNG seed
    std::uint64_t max_cycles = 1'000'000;    // default run watchdog

    services::CoreMap map = services::CoreMap::standard();
    std::map<int, int> partners;             // explicit processor pairings
    std::map<int, r8::ObjectImage> images;   // per-core boot images
    // Per-core initial memory words, applied after the image: (offset, value).
    std::map<int, std::vector<std::pair<std::uint16_t, std::uint16_t>>> memory_init;

    // Throws ConfigError on anything build_system could not honour.
    void validate() const;
};

// JSON form. `base_dir` resolves relative "image" paths; images may also be
// inline ("origin" + "words"). to_json always emits images inline.
SystemConfig parse_system_config(const std::string& json_text, const std::string& base_dir);
SystemConfig load_system_config(const std::string& path);
std::string format_system_config(const SystemConfig& cfg);
void save_system_config(const SystemConfig& cfg, const std::string& path);

} // namespace multinoc::system
