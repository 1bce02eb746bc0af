// SPDX-License-Identifier: Apache-2.0
#include "multinoc/ips/address_map.hpp"

namespace multinoc::ips {

const char* to_string(AddressTarget t) {
    switch (t) {
    case AddressTarget::Local: return "local";
    case AddressTarget::OtherProcessor: return "other-processor";
    case AddressTarget::RemoteMemory: return "remote-memory";
    case AddressTarget::Notify: return "notify";
    case AddressTarget::Wait: return "wait";
    case AddressTarget::Io: return "io";
    case AddressTarget::Unmapped: return "unmapped";
    }
    return "?";
}

DecodedAddress decode_address(std::uint16_t addr) {
    if (addr < 1024) return {AddressTarget::Local, addr};
    if (addr < 2048) return {AddressTarget::OtherProcessor, static_cast<std::uint16_t>(addr - 1024)};
    if (addr < 3072) return {AddressTarget::RemoteMemory, static_cast<std::uint16_t>(addr - 2048)};
    switch (addr) {
    case 0xFFFD: return {AddressTarget::Notify, 0};
    case 0xFFFE: return {AddressTarget::Wait, 0};
    case 0xFFFF: return {AddressTarget::Io, 0};
    default: return {AddressTarget::Unmapped, 0};
    }
}

} // namespace multinoc::ips
