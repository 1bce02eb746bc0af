// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "multinoc/error.hpp"

namespace multinoc::r8 {

// The 36 processor instructions.
enum class Opcode : std::uint8_t {
    // three registers
    Add, Sub, And, Or, Xor, // Rd, Rs1, Rs2
    Ld, St,                 // value reg, base reg, offset reg
    // two registers
    Not, Sl0, Sl1, Sr0, Sr1, // Rd, Rs
    // one register
    Ldsp, Push, Pop, Jmpr, Jsrr, Jmpnr, Jmpzr, Jmpcr, Jmpvr,
    // no operands
    Rts, Nop, Halt,
    // register + 8-bit immediate
    Addi, Subi, Andi, Ori, Ldl, Ldh,
    // 10-bit signed displacement
    Jmpd, Jsrd, Jmpnd, Jmpzd, Jmpcd, Jmpvd,
};
inline constexpr int kOpcodeCount = 36;

enum class OperandShape : std::uint8_t {
    ThreeReg, // ADD..XOR, LD, ST
    TwoReg,   // NOT, shifts
    OneReg,   // LDSP, PUSH, POP, register jumps
    None,     // RTS, NOP, HALT
    RegImm,   // ADDI..LDH
    Disp,     // displacement jumps and calls
};

const char* mnemonic(Opcode op);
OperandShape shape(Opcode op);
int cycles_of(Opcode op); // fixed per-instruction cost, always in [2,4]

// One decoded instruction. Field use per shape: ThreeReg a,b,c; TwoReg a,b;
// OneReg a; RegImm a,imm; Disp disp (signed, [-512,511]).
struct Instruction {
    Opcode op = Opcode::Nop;
    std::uint8_t a = 0;
    std::uint8_t b = 0;
    std::uint8_t c = 0;
    std::uint8_t imm = 0;
    int disp = 0;

    bool operator==(const Instruction&) const = default;
};

// Instruction <-> 16-bit word. Encoding layout (major = bits 15..12):
//   0x0..0x4  ADD SUB AND OR XOR   a[11:8] b[7:4] c[3:0]
//   0x5/0x6   LD/ST                a[11:8] b[7:4] c[3:0]
//   0x7       register group, minor in [3:0]:
//               0..4  NOT SL0 SL1 SR0 SR1   a[11:8] b[7:4]
//               5..13 LDSP PUSH POP JMPR JSRR JMPNR JMPZR JMPCR JMPVR  a[11:8]
//               14/15 RTS NOP
//   0x8..0xD  ADDI SUBI ANDI ORI LDL LDH   a[11:8] imm[7:0]
//   0xE       minor in [11:10]: JMPD JSRD JMPND JMPZD, disp[9:0]
//   0xF       minor in [11:10]: JMPCD JMPVD HALT(disp=0), minor 3 undefined
// Unused fields must be zero; any other word decodes as undefined.
std::uint16_t encode(const Instruction& i);
std::optional<Instruction> decode(std::uint16_t word);

// Human-readable form ("ADD R1, R2, R3"); undefined words render as data.
std::string disassemble(std::uint16_t word);

} // namespace multinoc::r8
