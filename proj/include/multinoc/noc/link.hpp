// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "multinoc/noc/types.hpp"

namespace multinoc::noc {

// Simulator-side packet identity carried next to each flit for metrics and
// audits. Never consulted by routing or arbitration decisions.
using PacketId = std::uint32_t;

struct TaggedFlit {
    Flit value = 0;
    PacketId packet = 0; // 0 = untagged
};

// One directed handshake channel: router output -> neighbor input buffer,
// router local output -> IP, or IP -> router local input buffer.
//
// A transfer occupies two cycles. A flit offered in cycle t is committed into
// the downstream buffer at the end of cycle t+1 when the buffer had a free
// slot at the start of t+1, and becomes usable downstream in cycle t+2. While
// the downstream stays full the handshake is withheld and the flit waits on
// the link, completing two cycles after the slot frees (offered at t with k
// blocked cycles -> usable at t+k+2). Flits are never dropped or duplicated.
class Link {
public:
    bool idle() const { return !busy_; }
    bool busy() const { return busy_; }
    const TaggedFlit* in_flight() const { return busy_ ? &flit_ : nullptr; }

    // Start a transfer in cycle `now`. Only legal when idle.
    void offer(TaggedFlit f, Cycle now) {
        busy_ = true;
        flit_ = f;
        offered_at_ = now;
    }

    // Delivery attempt for cycle `now`; `downstream_space` is sampled from the
    // downstream buffer's start-of-cycle state. On success the transfer
    // commits at the end of `now` and the link frees for offers from now+1.
    std::optional<TaggedFlit> try_deliver(Cycle now, bool downstream_space) {
        if (!busy_ || now <= offered_at_ || !downstream_space) return std::nullopt;
        busy_ = false;
        return flit_;
    }

private:
    bool busy_ = false;
    TaggedFlit flit_{};
    Cycle offered_at_ = 0;
};

} // namespace multinoc::noc
