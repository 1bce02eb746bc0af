// SPDX-License-Identifier: Apache-2.0
#include "multinoc/r8/isa.hpp"

#include <sstream>

namespace multinoc::r8 {

namespace {

struct OpRow {
    Opcode op;
    const char* name;
    OperandShape shape;
    int cycles;
};

// Single source of truth for names, shapes and cycle costs.
constexpr OpRow kOps[kOpcodeCount] = {
    {Opcode::Add, "ADD", OperandShape::ThreeReg, 2},
    {Opcode::Sub, "SUB", OperandShape::ThreeReg, 2},
    {Opcode::And, "AND", OperandShape::ThreeReg, 2},
    {Opcode::Or, "OR", OperandShape::ThreeReg, 2},
    {Opcode::Xor, "XOR", OperandShape::ThreeReg, 2},
    {Opcode::Ld, "LD", OperandShape::ThreeReg, 4},
    {Opcode::St, "ST", OperandShape::ThreeReg, 4},
    {Opcode::Not, "NOT", OperandShape::TwoReg, 2},
    {Opcode::Sl0, "SL0", OperandShape::TwoReg, 2},
    {Opcode::Sl1, "SL1", OperandShape::TwoReg, 2},
    {Opcode::Sr0, "SR0", OperandShape::TwoReg, 2},
    {Opcode::Sr1, "SR1", OperandShape::TwoReg, 2},
    {Opcode::Ldsp, "LDSP", OperandShape::OneReg, 3},
    {Opcode::Push, "PUSH", OperandShape::OneReg, 3},
    {Opcode::Pop, "POP", OperandShape::OneReg, 3},
    {Opcode::Jmpr, "JMPR", OperandShape::OneReg, 3},
    {Opcode::Jsrr, "JSRR", OperandShape::OneReg, 3},
    {Opcode::Jmpnr, "JMPNR", OperandShape::OneReg, 3},
    {Opcode::Jmpzr, "JMPZR", OperandShape::OneReg, 3},
    {Opcode::Jmpcr, "JMPCR", OperandShape::OneReg, 3},
    {Opcode::Jmpvr, "JMPVR", OperandShape::OneReg, 3},
    {Opcode::Rts, "RTS", OperandShape::None, 3},
    {Opcode::Nop, "NOP", OperandShape::None, 2},
    {Opcode::Halt, "HALT", OperandShape::None, 2},
    {Opcode::Addi, "ADDI", OperandShape::RegImm, 2},
    {Opcode::Subi, "SUBI", OperandShape::RegImm, 2},
    {Opcode::Andi, "ANDI", OperandShape::RegImm, 2},
    {Opcode::Ori, "ORI", OperandShape::RegImm, 2},
    {Opcode::Ldl, "LDL", OperandShape::RegImm, 2},
    {Opcode::Ldh, "LDH", OperandShape::RegImm, 2},
    {Opcode::Jmpd, "JMPD", OperandShape::Disp, 3},
    {Opcode::Jsrd, "JSRD", OperandShape::Disp, 3},
    {Opcode::Jmpnd, "JMPND", OperandShape::Disp, 3},
    {Opcode::Jmpzd, "JMPZD", OperandShape::Disp, 3},
    {Opcode::Jmpcd, "JMPCD", OperandShape::Disp, 3},
    {Opcode::Jmpvd, "JMPVD", OperandShape::Disp, 3},
};

const OpRow& row(Opcode op) { return kOps[static_cast<std::size_t>(op)]; }

// Minor codes of the 0x7 register group, indexed as listed in the header.
constexpr Opcode kGroup7[16] = {
    Opcode::Not, Opcode::Sl0,  Opcode::Sl1,  Opcode::Sr0,   Opcode::Sr1,   Opcode::Ldsp,
    Opcode::Push, Opcode::Pop, Opcode::Jmpr, Opcode::Jsrr,  Opcode::Jmpnr, Opcode::Jmpzr,
    Opcode::Jmpcr, Opcode::Jmpvr, Opcode::Rts, Opcode::Nop,
};

int group7_minor(Opcode op) {
    for (int i = 0; i < 16; ++i)
        if (kGroup7[i] == op) return i;
    return -1;
}

void check_reg(std::uint8_t r, const char* what) {
    if (r > 15) throw DomainError(std::string(what) + " register out of range: R" +
                                  std::to_string(r));
}

} // namespace

const char* mnemonic(Opcode op) { return row(op).name; }
OperandShape shape(Opcode op) { return row(op).shape; }
int cycles_of(Opcode op) { return row(op).cycles; }

std::uint16_t encode(const Instruction& i) {
    auto word = [](int major, int a, int b, int c) {
        return static_cast<std::uint16_t>((major << 12) | (a << 8) | (b << 4) | c);
    };
    switch (shape(i.op)) {
    case OperandShape::ThreeReg: {
        check_reg(i.a, "first");
        check_reg(i.b, "second");
        check_reg(i.c, "third");
        int major;
        switch (i.op) {
        case Opcode::Add: major = 0x0; break;
        case Opcode::Sub: major = 0x1; break;
        case Opcode::And: major = 0x2; break;
        case Opcode::Or: major = 0x3; break;
        case Opcode::Xor: major = 0x4; break;
        case Opcode::Ld: major = 0x5; break;
        default: major = 0x6; break; // St
        }
        return word(major, i.a, i.b, i.c);
    }
    case OperandShape::TwoReg:
        check_reg(i.a, "first");
        check_reg(i.b, "second");
        return word(0x7, i.a, i.b, group7_minor(i.op));
    case OperandShape::OneReg:
        check_reg(i.a, "first");
        return word(0x7, i.a, 0, group7_minor(i.op));
    case OperandShape::None:
        if (i.op == Opcode::Halt) return static_cast<std::uint16_t>((0xF << 12) | (2 << 10));
        return word(0x7, 0, 0, group7_minor(i.op));
    case OperandShape::RegImm: {
        check_reg(i.a, "destination");
        int major;
        switch (i.op) {
        case Opcode::Addi: major = 0x8; break;
        case Opcode::Subi: major = 0x9; break;
        case Opcode::Andi: major = 0xA; break;
        case Opcode::Ori: major = 0xB; break;
        case Opcode::Ldl: major = 0xC; break;
        default: major = 0xD; break; // Ldh
        }
        return static_cast<std::uint16_t>((major << 12) | (i.a << 8) | i.imm);
    }
    case OperandShape::Disp: {
        if (i.disp < -512 || i.disp > 511)
            throw DomainError("displacement out of range: " + std::to_string(i.disp));
        int major, minor;
        switch (i.op) {
        case Opcode::Jmpd: major = 0xE; minor = 0; break;
        case Opcode::Jsrd: major = 0xE; minor = 1; break;
        case Opcode::Jmpnd: major = 0xE; minor = 2; break;
        case Opcode::Jmpzd: major = 0xE; minor = 3; break;
        case Opcode::Jmpcd: major = 0xF; minor = 0; break;
        default: major = 0xF; minor = 1; break; // Jmpvd
        }
        return static_cast<std::uint16_t>((major << 12) | (minor << 10) | (i.disp & 0x3FF));
    }
    }
    throw DomainError("unencodable instruction");
}

std::optional<Instruction> decode(std::uint16_t w) {
    int major = w >> 12;
    auto fa = static_cast<std::uint8_t>((w >> 8) & 0xF);
    auto fb = static_cast<std::uint8_t>((w >> 4) & 0xF);
    auto fc = static_cast<std::uint8_t>(w & 0xF);

    Instruction i;
    if (major <= 0x6) {
        constexpr Opcode ops[] = {Opcode::Add, Opcode::Sub, Opcode::And, Opcode::Or,
                                  Opcode::Xor, Opcode::Ld,  Opcode::St};
        i.op = ops[major];
        i.a = fa;
        i.b = fb;
        i.c = fc;
        return i;
    }
    if (major == 0x7) {
        i.op = kGroup7[fc];
        switch (shape(i.op)) {
        case OperandShape::TwoReg:
            i.a = fa;
            i.b = fb;
            return i;
        case OperandShape::OneReg:
            if (fb != 0) return std::nullopt;
            i.a = fa;
            return i;
        default: // RTS, NOP
            if (fa != 0 || fb != 0) return std::nullopt;
            return i;
        }
    }
    if (major <= 0xD) {
        constexpr Opcode ops[] = {Opcode::Addi, Opcode::Subi, Opcode::Andi,
                                  Opcode::Ori,  Opcode::Ldl,  Opcode::Ldh};
        i.op = ops[major - 0x8];
        i.a = fa;
        i.imm = static_cast<std::uint8_t>(w & 0xFF);
        return i;
    }
    int minor = (w >> 10) & 0x3;
    int raw_disp = w & 0x3FF;
    int disp = raw_disp >= 512 ? raw_disp - 1024 : raw_disp;
    if (major == 0xE) {
        constexpr Opcode ops[] = {Opcode::Jmpd, Opcode::Jsrd, Opcode::Jmpnd, Opcode::Jmpzd};
        i.op = ops[minor];
        i.disp = disp;
        return i;
    }
    switch (minor) {
    case 0: i.op = Opcode::Jmpcd; i.disp = disp; return i;
    case 1: i.op = Opcode::Jmpvd; i.disp = disp; return i;
    case 2:
        if (raw_disp != 0) return std::nullopt;
        i.op = Opcode::Halt;
        return i;
    default: return std::nullopt;
    }
}

std::string disassemble(std::uint16_t w) {
    auto inst = decode(w);
    std::ostringstream out;
    if (!inst) {
        out << ".word 0x" << std::hex << std::uppercase;
        out.width(4);
        out.fill('0');
        out << w << " ; undefined";
        return out.str();
    }
    out << mnemonic(inst->op);
    switch (shape(inst->op)) {
    case OperandShape::ThreeReg:
        out << " R" << int(inst->a) << ", R" << int(inst->b) << ", R" << int(inst->c);
        break;
    case OperandShape::TwoReg: out << " R" << int(inst->a) << ", R" << int(inst->b); break;
    case OperandShape::OneReg: out << " R" << int(inst->a); break;
    case OperandShape::None: break;
    case OperandShape::RegImm: out << " R" << int(inst->a) << ", #" << int(inst->imm); break;
    case OperandShape::Disp: out << " " << inst->disp; break;
    }
    return out.str();
}

} // namespace multinoc::r8
