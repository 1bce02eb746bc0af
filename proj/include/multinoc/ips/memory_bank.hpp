// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "multinoc/error.hpp"
#include "multinoc/r8/core.hpp"

namespace multinoc::ips {

// Dual-ported 1024x16 storage with processor priority. Within one cycle the
// processor side always completes; the network side gets the banks only on
// cycles the processor leaves free. Callers drive the cycle boundary with
// begin_cycle().
class MemoryBank {
public:
    static constexpr std::size_t kWords = r8::kLocalWords;

    void begin_cycle() { proc_used_ = false; }

    // Processor port: always serviced, marks the banks busy for this cycle.
    std::uint16_t proc_read(std::uint16_t offset) {
        proc_used_ = true;
        return at(offset);
    }
    void proc_write(std::uint16_t offset, std::uint16_t value) {
        proc_used_ = true;
        at(offset) = value;
    }

    // Network port: refused (nullopt / false) while the processor holds the
    // banks this cycle.
    std::optional<std::uint16_t> noc_read(std::uint16_t offset) {
        if (proc_used_) return std::nullopt;
        return at(offset);
    }
    bool noc_write(std::uint16_t offset, std::uint16_t value) {
        if (proc_used_) return false;
        at(offset) = value;
        return true;
    }

    bool proc_used_this_cycle() const { return proc_used_; }

    // Non-simulated access for loaders and inspection; no timing effects.
    std::uint16_t peek(std::uint16_t offset) const { return at(offset); }
    void poke(std::uint16_t offset, std::uint16_t value) { at(offset) = value; }

private:
    std::uint16_t& at(std::uint16_t offset) {
        if (offset >= r8::kLocalWords)
            throw DomainError("memory offset " + std::to_string(offset) + " out of bounds");
        return words_[offset];
    }
    const std::uint16_t& at(std::uint16_t offset) const {
        return const_cast<MemoryBank*>(this)->at(offset);
    }

    std::array<std::uint16_t, r8::kLocalWords> words_{};
    bool proc_used_ = false;
};

// One-shot arbitration helper mirroring the bank contract: the processor
// request completes this cycle; the network request completes only when the
// processor side is absent, otherwise it is reported deferred.
struct MemRequest {
    bool write = false;
    std::uint16_t offset = 0;
    std::uint16_t value = 0;
};

struct MemCycleResult {
    std::optional<std::uint16_t> proc; // read data (or echo of the written value)
    std::optional<std::uint16_t> noc;
    bool noc_deferred = false;
};

MemCycleResult mem_cycle(MemoryBank& m, const std::optional<MemRequest>& proc,
                         const std::optional<MemRequest>& noc);

} // namespace multinoc::ips
