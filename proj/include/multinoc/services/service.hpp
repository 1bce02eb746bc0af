// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "multinoc/error.hpp"
#include "multinoc/noc/types.hpp"

namespace multinoc::services {

// Platform service selector, the first byte of every service packet body.
// Wait is a processor-local primitive: it blocks until a notification and
// never appears on the wire.
enum class ServiceKind : std::uint8_t {
    ReadMem = 0x01,     // [kind, source, addr_hi, addr_lo, count]
    ReadReturn = 0x02,  // [kind, addr_hi, addr_lo, count, words...]
    WriteMem = 0x03,    // [kind, addr_hi, addr_lo, count, words...]
    Activate = 0x04,    // [kind]
    Printf = 0x05,      // [kind, source, data_hi, data_lo]
    Scanf = 0x06,       // [kind, source]
    ScanfReturn = 0x07, // [kind, data_hi, data_lo]
    Notify = 0x08,      // [kind, source]
    Wait = 0x09,        // reserved; never enters the network
};

const char* to_string(ServiceKind k);

// Word transfers are capped so a read's reply body (4 + 2*count flits)
// still fits the single-byte packet size field.
inline constexpr int kMaxServiceWords = 125;

// One decoded service message. Which fields are meaningful depends on kind:
//   source  - ReadMem, Printf, Scanf, Notify (requesting core id)
//   address - ReadMem, ReadReturn, WriteMem
//   count   - ReadMem (words requested); ReadReturn/WriteMem (words carried,
//             must equal words.size(); decode fills it from the wire)
//   data    - Printf, ScanfReturn
//   words   - ReadReturn, WriteMem (16-bit words, sent high byte first)
struct ServiceMessage {
    ServiceKind kind = ServiceKind::Wait;
    std::uint8_t source = 0;
    std::uint16_t address = 0;
    std::uint8_t count = 0;
    std::uint16_t data = 0;
    std::vector<std::uint16_t> words;

    bool operator==(const ServiceMessage&) const = default;
};

// Message body <-> flit sequence (the packet payload after the size field).
std::vector<noc::Flit> encode_service(const ServiceMessage& m);
ServiceMessage decode_service(const std::vector<noc::Flit>& body);

// Complete wire packet: destination header, size field, body. Bodies of up
// to 255 flits use the single-byte size form; every service body fits.
std::vector<noc::Flit> make_service_packet(noc::NetAddress dst, const ServiceMessage& m);

} // namespace multinoc::services
