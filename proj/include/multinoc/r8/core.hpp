// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

#include "multinoc/error.hpp"
#include "multinoc/r8/isa.hpp"

namespace multinoc::r8 {

// Architectural state. Reset leaves everything zero and the core runnable;
// the platform holds `stalled` while a network transaction is outstanding.
struct R8State {
    std::array<std::uint16_t, 16> regs{};
    std::uint16_t pc = 0;
    std::uint16_t sp = 0;
    std::uint16_t ir = 0;
    bool n = false, z = false, c = false, v = false;
    bool halted = false;
    bool stalled = false;
};

// Memory side effect of one instruction. Only LD and ST produce one; the
// platform decodes `address` against the memory map and performs the access.
struct MemEffect {
    enum class Kind : std::uint8_t { None, Load, Store } kind = Kind::None;
    std::uint16_t address = 0;
    std::uint16_t value = 0;  // store data
    std::uint8_t reg = 0;     // load destination register
};

struct StepResult {
    int cycles = 0; // 2..4
    MemEffect effect;
};

// Word store backing instruction fetch and the stack. Addresses passed in
// are already wrapped into the 1024-word local space.
class CoreMemory {
public:
    virtual ~CoreMemory() = default;
    virtual std::uint16_t read(std::uint16_t offset) = 0;
    virtual void write(std::uint16_t offset, std::uint16_t value) = 0;
};

inline constexpr std::uint16_t kLocalWords = 1024;
inline constexpr std::uint16_t kLocalMask = kLocalWords - 1;

// Execute one instruction: fetch at pc (local memory, wrapped), decode,
// apply. LD/ST compute (base + offset) mod 2^16 and report it without
// touching memory; a remote load's value arrives later via retire_load.
// Throws ParseError on an undefined instruction word, DomainError when
// called on a halted or stalled core.
StepResult step(R8State& s, CoreMemory& local);

// Complete an outstanding load: write the fetched word to its register.
// Load data never changes flags.
void retire_load(R8State& s, std::uint8_t reg, std::uint16_t value);

} // namespace multinoc::r8
