// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <deque>
#include <optional>

#include "multinoc/ips/address_map.hpp"
#include "multinoc/ips/ip_endpoint.hpp"
#include "multinoc/ips/memory_bank.hpp"
#include "multinoc/r8/core.hpp"
#include "multinoc/r8/object.hpp"
#include "multinoc/services/core_map.hpp"

namespace multinoc::ips {

// NoC-side memory work: one word moves per cycle, and only on cycles the
// processor leaves the banks free.
struct NocMemJob {
    bool write = false;
    std::uint16_t addr = 0;
    std::uint8_t count = 0;
    std::uint8_t done = 0;
    std::uint8_t source = 0; // requesting core (read replies go back to it)
    std::vector<std::uint16_t> words;
};

// A processor tile: R8 core + 1024-word local memory + the network adapter
// that decodes load/store addresses into local accesses, remote reads and
// writes, I/O, and the wait/notify handshake.
class ProcessorIp : public IpEndpoint {
public:
    struct Config {
        int core = 0;
        services::CoreMap map = services::CoreMap::standard();
        std::optional<int> partner;       // other-processor window target
        std::optional<int> remote_memory; // shared-memory window target
        std::optional<int> serial;        // printf/scanf target
    };

    // Derive window targets from the platform map: the partner is the other
    // processor when there are exactly two, the memory window goes to the
    // first memory core, I/O to the serial bridge.
    static Config config_for(const services::CoreMap& map, int core);

    explicit ProcessorIp(Config cfg);

    void load_image(const r8::ObjectImage& image);

    MemoryBank& memory() { return bank_; }
    const MemoryBank& memory() const { return bank_; }
    r8::R8State& core() { return core_; }
    const r8::R8State& core() const { return core_; }
    bool activated() const { return activated_; }
    int core_id() const { return cfg_.core; }

    IpActivity activity() const override;
    std::uint64_t instructions_retired() const { return instructions_; }

protected:
    void handle_body(const std::vector<noc::Flit>& body, noc::Cycle now) override;
    void on_packet_injected(int token, noc::Cycle now) override;
    void advance(noc::Cycle now) override;

private:
    struct Txn {
        enum class Kind : std::uint8_t { None, RemoteRead, PostedStore, Scanf, WaitNotify };
        Kind kind = Kind::None;
        std::uint8_t reg = 0;     // load destination
        std::uint8_t partner = 0; // awaited notification source
    };

    void halt_with(noc::Cycle now, const std::string& why);
    void apply_effect(const r8::MemEffect& e, noc::Cycle now);
    void send_service(int target_core, const services::ServiceMessage& m, bool releases_core,
                      noc::Cycle now);
    void serve_jobs(noc::Cycle now);

    Config cfg_;
    MemoryBank bank_;
    r8::R8State core_;
    bool activated_ = false;
    int cycles_left_ = 0;
    r8::MemEffect pending_;
    Txn txn_;
    std::array<bool, 256> notify_pending_{};
    std::deque<NocMemJob> jobs_;
    std::uint64_t instructions_ = 0;
};

} // namespace multinoc::ips
