// SPDX-License-Identifier: Apache-2.0
#include "multinoc/r8/core.hpp"

#include <sstream>

namespace multinoc::r8 {

namespace {

void set_nz(R8State& s, std::uint16_t r) {
    s.n = (r & 0x8000) != 0;
    s.z = r == 0;
}

// Adder-based flags shared by addition and subtraction (b pre-complemented
// for subtraction, carry_in 1). C is the adder carry-out, so for SUB C=1
// means "no borrow". V is two's-complement overflow.
std::uint16_t add_flags(R8State& s, std::uint16_t a, std::uint16_t b, unsigned carry_in) {
    unsigned wide = unsigned(a) + unsigned(b) + carry_in;
    auto r = static_cast<std::uint16_t>(wide);
    s.c = wide > 0xFFFF;
    s.v = ((~(a ^ b) & (a ^ r)) & 0x8000) != 0;
    set_nz(s, r);
    return r;
}

std::uint16_t logic_flags(R8State& s, std::uint16_t r) {
    s.c = false;
    s.v = false;
    set_nz(s, r);
    return r;
}

std::uint16_t shift_flags(R8State& s, std::uint16_t r, bool shifted_out) {
    s.c = shifted_out;
    s.v = false;
    set_nz(s, r);
    return r;
}

void push(R8State& s, CoreMemory& local, std::uint16_t value) {
    local.write(s.sp & kLocalMask, value);
    --s.sp;
}

std::uint16_t pop(R8State& s, CoreMemory& local) {
    ++s.sp;
    return local.read(s.sp & kLocalMask);
}

} // namespace

StepResult step(R8State& s, CoreMemory& local) {
    if (s.halted) throw DomainError("step on a halted core");
    if (s.stalled) throw DomainError("step on a stalled core");

    s.ir = local.read(s.pc & kLocalMask);
    auto pc_after = static_cast<std::uint16_t>(s.pc + 1);
    auto inst = decode(s.ir);
    if (!inst) {
        std::ostringstream msg;
        msg << "undefined instruction word 0x" << std::hex << s.ir << " at 0x" << s.pc;
        throw ParseError(msg.str(), s.pc);
    }

    StepResult res;
    res.cycles = cycles_of(inst->op);
    std::uint16_t pc_next = pc_after;
    auto& R = s.regs;
    auto jump_if = [&](bool cond, std::uint16_t target) {
        if (cond) pc_next = target;
    };
    auto disp_target = [&] { return static_cast<std::uint16_t>(pc_after + inst->disp); };

    switch (inst->op) {
    case Opcode::Add: R[inst->a] = add_flags(s, R[inst->b], R[inst->c], 0); break;
    case Opcode::Sub:
        R[inst->a] = add_flags(s, R[inst->b], static_cast<std::uint16_t>(~R[inst->c]), 1);
        break;
    case Opcode::And: R[inst->a] = logic_flags(s, R[inst->b] & R[inst->c]); break;
    case Opcode::Or: R[inst->a] = logic_flags(s, R[inst->b] | R[inst->c]); break;
    case Opcode::Xor: R[inst->a] = logic_flags(s, R[inst->b] ^ R[inst->c]); break;

    case Opcode::Ld:
        res.effect = {MemEffect::Kind::Load,
                      static_cast<std::uint16_t>(R[inst->b] + R[inst->c]), 0, inst->a};
        break;
    case Opcode::St:
        res.effect = {MemEffect::Kind::Store,
                      static_cast<std::uint16_t>(R[inst->b] + R[inst->c]), R[inst->a], 0};
        break;

    case Opcode::Not: R[inst->a] = logic_flags(s, static_cast<std::uint16_t>(~R[inst->b])); break;
    case Opcode::Sl0:
        R[inst->a] = shift_flags(s, static_cast<std::uint16_t>(R[inst->b] << 1),
                                 (R[inst->b] & 0x8000) != 0);
        break;
    case Opcode::Sl1:
        R[inst->a] = shift_flags(s, static_cast<std::uint16_t>((R[inst->b] << 1) | 1),
                                 (R[inst->b] & 0x8000) != 0);
        break;
    case Opcode::Sr0:
        R[inst->a] = shift_flags(s, static_cast<std::uint16_t>(R[inst->b] >> 1),
                                 (R[inst->b] & 1) != 0);
        break;
    case Opcode::Sr1:
        R[inst->a] = shift_flags(s, static_cast<std::uint16_t>((R[inst->b] >> 1) | 0x8000),
                                 (R[inst->b] & 1) != 0);
        break;

    case Opcode::Ldsp: s.sp = R[inst->a]; break;
    case Opcode::Push: push(s, local, R[inst->a]); break;
    case Opcode::Pop: R[inst->a] = pop(s, local); break;
    case Opcode::Jmpr: pc_next = R[inst->a]; break;
    case Opcode::Jsrr:
        push(s, local, pc_after);
        pc_next = R[inst->a];
        break;
    case Opcode::Jmpnr: jump_if(s.n, R[inst->a]); break;
    case Opcode::Jmpzr: jump_if(s.z, R[inst->a]); break;
    case Opcode::Jmpcr: jump_if(s.c, R[inst->a]); break;
    case Opcode::Jmpvr: jump_if(s.v, R[inst->a]); break;
    case Opcode::Rts: pc_next = pop(s, local); break;
    case Opcode::Nop: break;
    case Opcode::Halt: s.halted = true; break;

    case Opcode::Addi: R[inst->a] = add_flags(s, R[inst->a], inst->imm, 0); break;
    case Opcode::Subi:
        R[inst->a] = add_flags(s, R[inst->a], static_cast<std::uint16_t>(~inst->imm), 1);
        break;
    case Opcode::Andi: R[inst->a] = logic_flags(s, R[inst->a] & inst->imm); break;
    case Opcode::Ori: R[inst->a] = logic_flags(s, R[inst->a] | inst->imm); break;
    case Opcode::Ldl:
        R[inst->a] = static_cast<std::uint16_t>((R[inst->a] & 0xFF00) | inst->imm);
        break;
    case Opcode::Ldh:
        R[inst->a] = static_cast<std::uint16_t>((R[inst->a] & 0x00FF) | (inst->imm << 8));
        break;

    case Opcode::Jmpd: pc_next = disp_target(); break;
    case Opcode::Jsrd:
        push(s, local, pc_after);
        pc_next = disp_target();
        break;
    case Opcode::Jmpnd: jump_if(s.n, disp_target()); break;
    case Opcode::Jmpzd: jump_if(s.z, disp_target()); break;
    case Opcode::Jmpcd: jump_if(s.c, disp_target()); break;
    case Opcode::Jmpvd: jump_if(s.v, disp_target()); break;
    }

    s.pc = pc_next;
    return res;
}

void retire_load(R8State& s, std::uint8_t reg, std::uint16_t value) {
    if (reg > 15) throw DomainError("load retirement to a bad register");
    s.regs[reg] = value;
}

} // namespace multinoc::r8
