// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "multinoc/ips/ip_endpoint.hpp"
#include "multinoc/services/core_map.hpp"

namespace multinoc::ips {

// Byte codes spoken on the host side of the serial bridge.
namespace serial_frames {
inline constexpr std::uint8_t kSync = 0x55;
// host -> platform
inline constexpr std::uint8_t kRead = 0x00;
inline constexpr std::uint8_t kWrite = 0x01;
inline constexpr std::uint8_t kActivate = 0x02;
inline constexpr std::uint8_t kInputReply = 0x03;
// platform -> host
inline constexpr std::uint8_t kPrintf = 0x10;
inline constexpr std::uint8_t kScanf = 0x11;
inline constexpr std::uint8_t kReadReturn = 0x12;
inline constexpr std::uint8_t kError = 0x1F;
// kError detail codes
inline constexpr std::uint8_t kErrUnknownOpcode = 1;
inline constexpr std::uint8_t kErrUnknownCore = 2;
inline constexpr std::uint8_t kErrBadCount = 3;
} // namespace serial_frames

// The host bridge: a byte-oriented serial line on one side, service packets
// on the other.  Bytes move at a fixed pace (one per `byte_interval` cycles,
// each direction); frames are parsed after a 0x55 sync byte is seen.
class SerialIp : public IpEndpoint {
public:
    struct Config {
        int core = 0;
        services::CoreMap map = services::CoreMap::standard();
        int byte_interval = 1;
    };

    explicit SerialIp(Config cfg);

    // Host side.  host_send queues bytes toward the platform; host_take
    // drains the bytes that have finished crossing the line.
    void host_send(const std::vector<std::uint8_t>& bytes);
    std::vector<std::uint8_t> host_take();
    std::size_t host_backlog() const { return from_host_.size(); }
    bool synced() const { return synced_; }
    int core_id() const { return cfg_.core; }

    IpActivity activity() const override;

protected:
    void handle_body(const std::vector<noc::Flit>& body, noc::Cycle now) override;
    void advance(noc::Cycle now) override;

private:
    void consume_byte(std::uint8_t b, noc::Cycle now);
    void complete_frame(noc::Cycle now);
    void emit(std::vector<std::uint8_t> bytes);
    bool core_usable(int core, bool wants_memory) const;

    Config cfg_;
    bool synced_ = false;
    std::deque<std::uint8_t> from_host_;
    std::vector<std::uint8_t> frame_;
    std::deque<std::uint8_t> staged_;  // waiting for an outbound wire slot
    std::deque<std::uint8_t> to_host_; // crossed the wire; host_take() drains
    noc::Cycle next_rx_ = 0;
    noc::Cycle next_tx_ = 0;
    std::deque<int> outstanding_reads_; // cores owed a read-return frame
};

} // namespace multinoc::ips
