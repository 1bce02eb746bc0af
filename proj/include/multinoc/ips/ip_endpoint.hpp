// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "multinoc/noc/mesh.hpp"
#include "multinoc/services/service.hpp"

namespace multinoc::ips {

// What an IP is doing, for the platform's quiescence test. BlockedHost means
// waiting on outside input (scanf reply, wait-for-notify, host bytes): the
// platform may settle in that state. BlockedNetwork means waiting on traffic
// that must still arrive (a read reply, a posted write draining): with an
// empty network and no pending work anywhere, that state is a deadlock.
enum class IpActivity : std::uint8_t { Idle, Running, BlockedHost, BlockedNetwork };

// Common local-port plumbing for the IP models: reassembles incoming worms
// into service bodies and streams queued packets out, one flit at a time.
class IpEndpoint : public noc::Endpoint {
public:
    bool tx_ready(noc::Cycle) const override { return !tx_.empty(); }
    noc::Flit tx_front(noc::Cycle) const override { return tx_.front().value; }
    void tx_pop(noc::Cycle now) override;
    void rx_deliver(noc::Flit f, noc::Cycle usable_from) override;
    void on_cycle(noc::Cycle now) override;

    bool tx_pending() const { return !tx_.empty(); }
    // Incoming flits not yet parsed into bodies: the IP still has work even
    // if the network is empty, so activity reports Running while this holds.
    bool rx_pending() const { return !rx_.empty(); }
    virtual IpActivity activity() const = 0;

    const std::vector<std::string>& diagnostics() const { return diags_; }

protected:
    // Queue a complete wire packet. `token` (nonzero) is reported back via
    // on_packet_injected once the packet's last flit has left for the router.
    void queue_packet(const std::vector<noc::Flit>& pkt, int token = 0);

    // A complete packet body (service payload, header and size stripped)
    // became usable this cycle.
    virtual void handle_body(const std::vector<noc::Flit>& body, noc::Cycle now) = 0;
    virtual void on_packet_injected(int token, noc::Cycle now) { (void)token; (void)now; }

    // Per-cycle work after incoming flits were processed.
    virtual void advance(noc::Cycle now) = 0;

    void diag(noc::Cycle now, const std::string& msg);

private:
    struct TxFlit {
        noc::Flit value;
        int token; // nonzero on a packet's last flit
    };
    enum class RxState : std::uint8_t { Header, Size, ExtHi, ExtLo, Payload };

    std::deque<TxFlit> tx_;
    std::deque<std::pair<noc::Cycle, noc::Flit>> rx_;
    RxState rx_state_ = RxState::Header;
    std::uint32_t rx_remaining_ = 0;
    std::uint8_t rx_ext_hi_ = 0;
    std::vector<noc::Flit> rx_body_;
    std::vector<std::string> diags_;
};

} // namespace multinoc::ips
