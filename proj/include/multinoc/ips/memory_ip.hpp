// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>

#include "multinoc/ips/ip_endpoint.hpp"
#include "multinoc/ips/memory_bank.hpp"
#include "multinoc/ips/processor_ip.hpp" // NocMemJob
#include "multinoc/r8/object.hpp"
#include "multinoc/services/core_map.hpp"

namespace multinoc::ips {

// A shared-memory tile: a 1024-word bank whose only client is the network.
// Write requests stream in at one word per cycle; read requests stream out
// a reply packet once the last word is fetched.
class MemoryIp : public IpEndpoint {
public:
    MemoryIp(int core, services::CoreMap map);

    MemoryBank& bank() { return bank_; }
    const MemoryBank& bank() const { return bank_; }
    void load_image(const r8::ObjectImage& image);
    int core_id() const { return core_; }

    IpActivity activity() const override;

protected:
    void handle_body(const std::vector<noc::Flit>& body, noc::Cycle now) override;
    void advance(noc::Cycle now) override;

private:
    int core_;
    services::CoreMap map_;
    MemoryBank bank_;
    std::deque<NocMemJob> jobs_;
};

} // namespace multinoc::ips
