// SPDX-License-Identifier: Apache-2.0
#include "multinoc/ips/ip_endpoint.hpp"

namespace multinoc::ips {

void IpEndpoint::tx_pop(noc::Cycle now) {
    TxFlit f = tx_.front();
    tx_.pop_front();
    if (f.token != 0) on_packet_injected(f.token, now);
}

void IpEndpoint::rx_deliver(noc::Flit f, noc::Cycle usable_from) {
    rx_.emplace_back(usable_from, f);
}

void IpEndpoint::queue_packet(const std::vector<noc::Flit>& pkt, int token) {
    if (pkt.size() < 3) throw DomainError("wire packets carry at least three flits");
    for (std::size_t i = 0; i < pkt.size(); ++i)
        tx_.push_back(TxFlit{pkt[i], i + 1 == pkt.size() ? token : 0});
}

void IpEndpoint::diag(noc::Cycle now, const std::string& msg) {
    if (diags_.size() < 1000) diags_.push_back("cycle " + std::to_string(now) + ": " + msg);
}

void IpEndpoint::on_cycle(noc::Cycle now) {
    while (!rx_.empty() && rx_.front().first <= now) {
        noc::Flit f = rx_.front().second;
        rx_.pop_front();
        switch (rx_state_) {
        case RxState::Header:
            rx_body_.clear();
            rx_state_ = RxState::Size;
            break;
        case RxState::Size:
            if (f == 0) {
                rx_state_ = RxState::ExtHi;
            } else {
                rx_remaining_ = f;
                rx_state_ = RxState::Payload;
            }
            break;
        case RxState::ExtHi:
            rx_ext_hi_ = f;
            rx_state_ = RxState::ExtLo;
            break;
        case RxState::ExtLo:
            rx_remaining_ = (static_cast<std::uint32_t>(rx_ext_hi_) << 8) | f;
            if (rx_remaining_ == 0) {
                rx_state_ = RxState::Header;
                handle_body(rx_body_, now);
            } else {
                rx_state_ = RxState::Payload;
            }
            break;
        case RxState::Payload:
            rx_body_.push_back(f);
            if (--rx_remaining_ == 0) {
                rx_state_ = RxState::Header;
                handle_body(rx_body_, now);
            }
            break;
        }
    }
    advance(now);
}

} // namespace multinoc::ips
