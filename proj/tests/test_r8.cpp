// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <map>
#include <random>
#include <vector>

#include "multinoc/error.hpp"
#include "multinoc/r8/assembler.hpp"
#include "multinoc/r8/core.hpp"
#include "multinoc/r8/isa.hpp"
#include "multinoc/r8/object.hpp"

using namespace multinoc;
using namespace multinoc::r8;

namespace {

// Word store that records every access, for checking fetch behaviour and
// that data loads/stores never touch memory from inside the core.
struct FakeMem final : CoreMemory {
    std::array<std::uint16_t, kLocalWords> words{};
    std::vector<std::uint16_t> reads;
    std::vector<std::uint16_t> writes;

    std::uint16_t read(std::uint16_t o) override {
        reads.push_back(o);
        return words.at(o);
    }
    void write(std::uint16_t o, std::uint16_t v) override {
        writes.push_back(o);
        words.at(o) = v;
    }
};

void load(FakeMem& m, const ObjectImage& img) {
    std::uint16_t a = img.origin;
    for (std::uint16_t w : img.words) m.words.at(a++) = w;
}

// Steps until the core halts; fails the test if it never does.
int run_to_halt(R8State& s, FakeMem& m, int budget = 1000) {
    int steps = 0;
    while (!s.halted && steps < budget) {
        step(s, m);
        ++steps;
    }
    REQUIRE(s.halted);
    return steps;
}

std::vector<Opcode> all_opcodes() {
    std::vector<Opcode> ops;
    for (int i = 0; i < kOpcodeCount; ++i) ops.push_back(static_cast<Opcode>(i));
    return ops;
}

// Independent arithmetic reference built on plain integer math.
struct Ref {
    std::uint16_t r;
    bool n, z, c, v;
};

Ref ref_add(std::uint16_t a, std::uint16_t b) {
    const std::uint32_t u = std::uint32_t(a) + std::uint32_t(b);
    const std::uint16_t r = static_cast<std::uint16_t>(u);
    const std::int32_t s = std::int32_t(std::int16_t(a)) + std::int32_t(std::int16_t(b));
    return {r, (r & 0x8000) != 0, r == 0, u > 0xFFFF, s < -32768 || s > 32767};
}

Ref ref_sub(std::uint16_t a, std::uint16_t b) {
    const std::uint16_t r = static_cast<std::uint16_t>(a - b);
    const std::int32_t s = std::int32_t(std::int16_t(a)) - std::int32_t(std::int16_t(b));
    return {r, (r & 0x8000) != 0, r == 0, a >= b, s < -32768 || s > 32767};
}

} // namespace

TEST_CASE("every word decodes consistently and re-encodes to itself") {
    // Capacity per operand shape follows from the field layout.
    auto capacity = [](Opcode op) -> int {
        switch (shape(op)) {
        case OperandShape::ThreeReg: return 16 * 16 * 16;
        case OperandShape::TwoReg: return 16 * 16;
        case OperandShape::OneReg: return 16;
        case OperandShape::None: return 1;
        case OperandShape::RegImm: return 16 * 256;
        case OperandShape::Disp: return 1024;
        }
        return 0;
    };
    int expected_total = 0;
    for (Opcode op : all_opcodes()) expected_total += capacity(op);

    std::map<Opcode, int> seen;
    int defined = 0;
    for (std::uint32_t w = 0; w <= 0xFFFF; ++w) {
        auto inst = decode(static_cast<std::uint16_t>(w));
        if (!inst) continue;
        ++defined;
        ++seen[inst->op];
        REQUIRE(encode(*inst) == w);
    }
    CHECK(defined == expected_total);
    for (Opcode op : all_opcodes()) CHECK(seen[op] == capacity(op));
}

TEST_CASE("every operand combination survives an encode/decode round trip") {
    for (Opcode op : all_opcodes()) {
        Instruction i;
        i.op = op;
        switch (shape(op)) {
        case OperandShape::ThreeReg:
            for (int a = 0; a < 16; ++a)
                for (int b = 0; b < 16; ++b)
                    for (int c = 0; c < 16; c += 3) {
                        i.a = std::uint8_t(a);
                        i.b = std::uint8_t(b);
                        i.c = std::uint8_t(c);
                        auto back = decode(encode(i));
                        REQUIRE(back.has_value());
                        REQUIRE(*back == i);
                    }
            break;
        case OperandShape::TwoReg:
            for (int a = 0; a < 16; ++a)
                for (int b = 0; b < 16; ++b) {
                    i.a = std::uint8_t(a);
                    i.b = std::uint8_t(b);
                    auto back = decode(encode(i));
                    REQUIRE(back.has_value());
                    REQUIRE(*back == i);
                }
            break;
        case OperandShape::OneReg:
            for (int a = 0; a < 16; ++a) {
                i.a = std::uint8_t(a);
                auto back = decode(encode(i));
                REQUIRE(back.has_value());
                REQUIRE(*back == i);
            }
            break;
        case OperandShape::None: {
            auto back = decode(encode(i));
            REQUIRE(back.has_value());
            REQUIRE(*back == i);
            break;
        }
        case OperandShape::RegImm:
            for (int a = 0; a < 16; ++a)
                for (int imm = 0; imm <= 255; ++imm) {
                    i.a = std::uint8_t(a);
                    i.imm = std::uint8_t(imm);
                    auto back = decode(encode(i));
                    REQUIRE(back.has_value());
                    REQUIRE(*back == i);
                }
            break;
        case OperandShape::Disp:
            for (int d = -512; d <= 511; ++d) {
                i.disp = d;
                auto back = decode(encode(i));
                REQUIRE(back.has_value());
                REQUIRE(*back == i);
            }
            break;
        }
    }

    SUBCASE("field range violations are rejected at encode time") {
        CHECK_THROWS_AS(encode(Instruction{Opcode::Add, 16, 0, 0, 0, 0}), DomainError);
        CHECK_THROWS_AS(encode(Instruction{Opcode::Jmpd, 0, 0, 0, 0, 512}), DomainError);
        CHECK_THROWS_AS(encode(Instruction{Opcode::Jmpd, 0, 0, 0, 0, -513}), DomainError);
    }
}

TEST_CASE("per-instruction cycle costs") {
    std::map<std::string, int> table;
    for (const char* two : {"ADD", "SUB", "AND", "OR", "XOR", "NOT", "SL0", "SL1", "SR0", "SR1",
                            "ADDI", "SUBI", "ANDI", "ORI", "LDL", "LDH", "NOP", "HALT"})
        table[two] = 2;
    for (const char* three : {"LDSP", "PUSH", "POP", "RTS", "JMPR", "JSRR", "JMPNR", "JMPZR",
                              "JMPCR", "JMPVR", "JMPD", "JSRD", "JMPND", "JMPZD", "JMPCD",
                              "JMPVD"})
        table[three] = 3;
    table["LD"] = 4;
    table["ST"] = 4;

    REQUIRE(table.size() == std::size_t(kOpcodeCount));
    for (Opcode op : all_opcodes()) {
        INFO(mnemonic(op));
        REQUIRE(table.count(mnemonic(op)) == 1);
        CHECK(cycles_of(op) == table[mnemonic(op)]);
    }
}

TEST_CASE("arithmetic flags match a wide-integer reference") {
    std::mt19937_64 rng(0xA11CE);
    auto rnd16 = [&] { return static_cast<std::uint16_t>(rng()); };
    // Bias toward edge values where carry/overflow flip.
    auto value = [&]() -> std::uint16_t {
        switch (rng() % 6) {
        case 0: return 0;
        case 1: return 0xFFFF;
        case 2: return 0x8000;
        case 3: return 0x7FFF;
        default: return rnd16();
        }
    };

    for (int trial = 0; trial < 200000; ++trial) {
        R8State s;
        FakeMem m;
        const int kind = int(rng() % 4);
        Instruction i;
        Ref want{};
        std::uint8_t dest = 0;
        if (kind < 2) { // three-register add/sub, aliasing allowed
            i.op = kind == 0 ? Opcode::Add : Opcode::Sub;
            i.a = std::uint8_t(rng() % 16);
            i.b = std::uint8_t(rng() % 16);
            i.c = std::uint8_t(rng() % 16);
            for (auto& r : s.regs) r = value();
            const std::uint16_t lhs = s.regs[i.b];
            const std::uint16_t rhs = s.regs[i.c];
            want = kind == 0 ? ref_add(lhs, rhs) : ref_sub(lhs, rhs);
            dest = i.a;
        } else { // two-address immediate forms, zero-extended operand
            i.op = kind == 2 ? Opcode::Addi : Opcode::Subi;
            i.a = std::uint8_t(rng() % 16);
            i.imm = std::uint8_t(rng());
            for (auto& r : s.regs) r = value();
            const std::uint16_t lhs = s.regs[i.a];
            want = kind == 2 ? ref_add(lhs, i.imm) : ref_sub(lhs, i.imm);
            dest = i.a;
        }
        m.words[0] = encode(i);
        const StepResult res = step(s, m);
        REQUIRE(res.cycles == 2);
        REQUIRE(s.regs[dest] == want.r);
        REQUIRE(s.n == want.n);
        REQUIRE(s.z == want.z);
        REQUIRE(s.c == want.c);
        REQUIRE(s.v == want.v);
    }
}

TEST_CASE("logic and shift flags") {
    std::mt19937_64 rng(0xB0B);
    for (int trial = 0; trial < 50000; ++trial) {
        R8State s;
        FakeMem m;
        for (auto& r : s.regs) r = static_cast<std::uint16_t>(rng());
        s.c = s.v = true; // logic and shifts must clear/overwrite these
        s.n = s.z = bool(rng() % 2);

        const int pick = int(rng() % 11);
        Instruction i;
        std::uint16_t expect = 0;
        bool expect_c = false;
        std::uint8_t dest = 0;
        const std::uint8_t a = std::uint8_t(rng() % 16), b = std::uint8_t(rng() % 16),
                           c = std::uint8_t(rng() % 16);
        const std::uint8_t imm = std::uint8_t(rng());
        const std::uint16_t vb = s.regs[b], vc = s.regs[c], va = s.regs[a];
        switch (pick) {
        case 0: i = {Opcode::And, a, b, c, 0, 0}; expect = vb & vc; dest = a; break;
        case 1: i = {Opcode::Or, a, b, c, 0, 0}; expect = vb | vc; dest = a; break;
        case 2: i = {Opcode::Xor, a, b, c, 0, 0}; expect = vb ^ vc; dest = a; break;
        case 3: i = {Opcode::Not, a, b, 0, 0, 0}; expect = std::uint16_t(~vb); dest = a; break;
        case 4: i = {Opcode::Andi, a, 0, 0, imm, 0}; expect = va & imm; dest = a; break;
        case 5: i = {Opcode::Ori, a, 0, 0, imm, 0}; expect = va | imm; dest = a; break;
        case 6:
            i = {Opcode::Sl0, a, b, 0, 0, 0};
            expect = std::uint16_t(vb << 1);
            expect_c = (vb & 0x8000) != 0;
            dest = a;
            break;
        case 7:
            i = {Opcode::Sl1, a, b, 0, 0, 0};
            expect = std::uint16_t((vb << 1) | 1);
            expect_c = (vb & 0x8000) != 0;
            dest = a;
            break;
        case 8:
            i = {Opcode::Sr0, a, b, 0, 0, 0};
            expect = std::uint16_t(vb >> 1);
            expect_c = (vb & 1) != 0;
            dest = a;
            break;
        case 9:
            i = {Opcode::Sr1, a, b, 0, 0, 0};
            expect = std::uint16_t((vb >> 1) | 0x8000);
            expect_c = (vb & 1) != 0;
            dest = a;
            break;
        default:
            i = {Opcode::Xor, a, b, b, 0, 0}; // x^x: guaranteed zero result
            expect = 0;
            dest = a;
            break;
        }
        m.words[0] = encode(i);
        step(s, m);
        REQUIRE(s.regs[dest] == expect);
        REQUIRE(s.n == ((expect & 0x8000) != 0));
        REQUIRE(s.z == (expect == 0));
        REQUIRE(s.c == expect_c);
        REQUIRE(s.v == false);
    }
}

TEST_CASE("a store reports its address and data without touching memory") {
    R8State s;
    FakeMem m;
    s.regs[3] = 2;
    s.regs[1] = 0;
    s.regs[2] = 0xFFFE;
    m.words[0] = encode({Opcode::St, 3, 1, 2, 0, 0});
    const StepResult res = step(s, m);
    CHECK(res.cycles == 4);
    REQUIRE(res.effect.kind == MemEffect::Kind::Store);
    CHECK(res.effect.address == 0xFFFE);
    CHECK(res.effect.value == 2);
    CHECK(s.pc == 1);
    CHECK(m.writes.empty());           // the platform performs the access
    CHECK(m.reads.size() == 1);        // only the instruction fetch
    CHECK(m.reads.front() == 0);
}

TEST_CASE("a load completes later through retire without flag changes") {
    R8State s;
    FakeMem m;
    s.regs[1] = 0x0800;
    s.regs[2] = 0x0001;
    s.regs[5] = 0xAAAA;
    s.z = true;
    s.c = true;
    m.words[0] = encode({Opcode::Ld, 5, 1, 2, 0, 0});
    const StepResult res = step(s, m);
    CHECK(res.cycles == 4);
    REQUIRE(res.effect.kind == MemEffect::Kind::Load);
    CHECK(res.effect.address == 0x0801);
    CHECK(res.effect.reg == 5);
    CHECK(s.regs[5] == 0xAAAA); // unchanged until the platform answers
    retire_load(s, 5, 0xBEEF);
    CHECK(s.regs[5] == 0xBEEF);
    CHECK(s.z);
    CHECK(s.c);
}

TEST_CASE("byte loads build 16-bit constants") {
    SUBCASE("assembled two-step constant") {
        Assembly a = assemble("LDH R1,#0x00\nLDL R1,#0x20\nHALT\n");
        R8State s;
        FakeMem m;
        load(m, a.image);
        s.regs[1] = 0xFFFF;
        s.c = s.v = s.n = s.z = true;
        step(s, m);
        step(s, m);
        CHECK(s.regs[1] == 0x0020);
        CHECK(s.c); // byte loads leave flags alone
        CHECK(s.v);
        CHECK(s.n);
        CHECK(s.z);
    }
    SUBCASE("each half preserves the other") {
        R8State s;
        FakeMem m;
        s.regs[4] = 0x1234;
        m.words[0] = encode({Opcode::Ldl, 4, 0, 0, 0xCD, 0});
        m.words[1] = encode({Opcode::Ldh, 4, 0, 0, 0xAB, 0});
        step(s, m);
        CHECK(s.regs[4] == 0x12CD);
        step(s, m);
        CHECK(s.regs[4] == 0xABCD);
    }
}

TEST_CASE("a jump to itself is a fixed point") {
    Assembly a = assemble("HERE: JMPD HERE\n");
    REQUIRE(a.image.words.size() == 1);
    CHECK(a.image.words[0] == 0xE3FF); // displacement -1 from the next word
    R8State s;
    FakeMem m;
    load(m, a.image);
    for (int k = 0; k < 3; ++k) {
        const StepResult res = step(s, m);
        CHECK(res.cycles == 3);
        CHECK(s.pc == 0);
    }
}

TEST_CASE("subtracting a register from itself sets zero and carry") {
    R8State s;
    FakeMem m;
    s.regs[2] = 0x1234;
    m.words[0] = encode({Opcode::Sub, 1, 2, 2, 0, 0});
    step(s, m);
    CHECK(s.regs[1] == 0);
    CHECK(s.z);
    CHECK_FALSE(s.n);
    CHECK(s.c); // no borrow
    CHECK_FALSE(s.v);
}

TEST_CASE("stack, calls and returns round trip through memory") {
    const char* src = "      LDL R0,#0xFF\n"
                      "      LDH R0,#0x03\n"
                      "      LDSP R0\n"
                      "      LDL R1,#0x42\n"
                      "      PUSH R1\n"
                      "      LDL R1,#0x00\n"
                      "      POP R2\n"
                      "      JSRD SUB1\n"
                      "      LDL R3,#0x11\n"
                      "      HALT\n"
                      "SUB1: LDL R4,#0x07\n"
                      "      RTS\n";
    Assembly a = assemble(src);
    R8State s;
    FakeMem m;
    load(m, a.image);
    const int steps = run_to_halt(s, m);
    CHECK(steps == 12);
    CHECK(s.regs[0] == 0x03FF);
    CHECK(s.regs[1] == 0);
    CHECK(s.regs[2] == 0x42);    // made it through the stack
    CHECK(s.regs[3] == 0x11);    // executed after the return
    CHECK(s.regs[4] == 0x07);    // the subroutine ran
    CHECK(s.sp == 0x03FF);       // balanced push/pop and call/return
    CHECK(m.words[0x3FF] == 8);  // last stack slot holds the return address
}

TEST_CASE("interpreter is deterministic") {
    const char* src = "      LDL R0,#0xFF\n"
                      "      LDH R0,#0x03\n"
                      "      LDSP R0\n"
                      "LOOP: ADDI R1,#7\n"
                      "      SUBI R2,#3\n"
                      "      PUSH R1\n"
                      "      POP R3\n"
                      "      XOR R4,R1,R2\n"
                      "      SUBI R5,#1\n"
                      "      JMPZD DONE\n"
                      "      JMPD LOOP\n"
                      "DONE: HALT\n";
    Assembly a = assemble(src);
    auto run = [&] {
        R8State s;
        s.regs[5] = 40;
        FakeMem m;
        load(m, a.image);
        std::vector<R8State> trace;
        while (!s.halted) {
            step(s, m);
            trace.push_back(s);
        }
        return trace;
    };
    auto t1 = run();
    auto t2 = run();
    REQUIRE(t1.size() == t2.size());
    for (std::size_t k = 0; k < t1.size(); ++k) {
        REQUIRE(t1[k].regs == t2[k].regs);
        REQUIRE(t1[k].pc == t2[k].pc);
        REQUIRE(t1[k].sp == t2[k].sp);
    }
}

TEST_CASE("conditional jumps follow the flags") {
    struct Case {
        Opcode disp_form;
        Opcode reg_form;
        bool R8State::*flag;
    };
    const Case cases[] = {
        {Opcode::Jmpnd, Opcode::Jmpnr, &R8State::n},
        {Opcode::Jmpzd, Opcode::Jmpzr, &R8State::z},
        {Opcode::Jmpcd, Opcode::Jmpcr, &R8State::c},
        {Opcode::Jmpvd, Opcode::Jmpvr, &R8State::v},
    };
    for (const Case& cs : cases) {
        for (bool set : {false, true}) {
            // displacement form
            {
                R8State s;
                FakeMem m;
                s.*(cs.flag) = set;
                Instruction i;
                i.op = cs.disp_form;
                i.disp = 5;
                m.words[0] = encode(i);
                const StepResult res = step(s, m);
                CHECK(res.cycles == 3);
                CHECK(s.pc == (set ? 6 : 1)); // target is pc-after plus disp
                CHECK(s.*(cs.flag) == set);   // jumps never touch flags
            }
            // register form
            {
                R8State s;
                FakeMem m;
                s.*(cs.flag) = set;
                s.regs[9] = 0x0123;
                Instruction i;
                i.op = cs.reg_form;
                i.a = 9;
                m.words[0] = encode(i);
                const StepResult res = step(s, m);
                CHECK(res.cycles == 3);
                CHECK(s.pc == (set ? 0x0123 : 1));
            }
        }
    }
    SUBCASE("unconditional forms always go") {
        R8State s;
        FakeMem m;
        Instruction i;
        i.op = Opcode::Jmpd;
        i.disp = -1;
        m.words[0] = encode(i);
        step(s, m);
        CHECK(s.pc == 0);

        R8State s2;
        s2.regs[4] = 0x00FF;
        FakeMem m2;
        Instruction j;
        j.op = Opcode::Jmpr;
        j.a = 4;
        m2.words[0] = encode(j);
        step(s2, m2);
        CHECK(s2.pc == 0x00FF);
    }
    SUBCASE("calls push the return address, returns pop it") {
        R8State s;
        FakeMem m;
        s.sp = 0x03FF;
        s.regs[7] = 0x0040;
        m.words[0] = encode({Opcode::Jsrr, 7, 0, 0, 0, 0});
        m.words[0x0040] = encode({Opcode::Rts, 0, 0, 0, 0, 0});
        step(s, m);
        CHECK(s.pc == 0x0040);
        CHECK(s.sp == 0x03FE);
        CHECK(m.words[0x03FF] == 1);
        step(s, m);
        CHECK(s.pc == 1);
        CHECK(s.sp == 0x03FF);
    }
}

TEST_CASE("undefined words refuse to decode and execute") {
    const std::uint16_t bad[] = {
        0xFC00, // last major group, undefined minor
        0xF801, // halt pattern with a nonzero displacement field
        0x7115, // one-register form with a nonzero second field
        0x710E, // no-operand form with a nonzero register field
        0x711F, // no-operand form with junk in both fields
    };
    for (std::uint16_t w : bad) {
        INFO(w);
        CHECK_FALSE(decode(w).has_value());
        R8State s;
        FakeMem m;
        m.words[0] = w;
        CHECK_THROWS_AS(step(s, m), ParseError);
    }
    // Sampled agreement: whatever fails to decode also refuses to run.
    std::mt19937_64 rng(77);
    int seen_undefined = 0;
    while (seen_undefined < 100) {
        const std::uint16_t w = static_cast<std::uint16_t>(rng());
        if (decode(w)) continue;
        ++seen_undefined;
        R8State s;
        FakeMem m;
        m.words[0] = w;
        CHECK_THROWS_AS(step(s, m), ParseError);
    }
}

TEST_CASE("halted and stalled cores refuse to step") {
    FakeMem m;
    m.words[0] = encode({Opcode::Nop, 0, 0, 0, 0, 0});
    R8State halted;
    halted.halted = true;
    CHECK_THROWS_AS(step(halted, m), DomainError);
    R8State stalled;
    stalled.stalled = true;
    CHECK_THROWS_AS(step(stalled, m), DomainError);
}

TEST_CASE("instruction fetch wraps at the top of local memory") {
    R8State s;
    FakeMem m;
    const std::uint16_t nop = encode({Opcode::Nop, 0, 0, 0, 0, 0});
    m.words.fill(nop);
    s.pc = 0x03FF;
    StepResult r1 = step(s, m);
    CHECK(r1.cycles == 2);
    CHECK(s.pc == 0x0400);
    step(s, m);
    REQUIRE(m.reads.size() == 2);
    CHECK(m.reads[0] == 0x03FF);
    CHECK(m.reads[1] == 0x0000); // 0x0400 wrapped into the local window
}

TEST_CASE("assembler golden program matches hand-encoded words") {
    const char* src = "START: LDL R1,#0x20\n"
                      "       LDH R1,#0x00\n"
                      "       ADDI R1,#1\n"
                      "       SUBI R1,#1\n"
                      "       ANDI R1,#0xFF\n"
                      "       ORI R1,#0x10\n"
                      "       ADD R2,R1,R1\n"
                      "       SUB R3,R2,R1\n"
                      "       AND R4,R3,R2\n"
                      "       OR R5,R4,R3\n"
                      "       XOR R6,R5,R4\n"
                      "       NOT R7,R6\n"
                      "       SL0 R8,R7\n"
                      "       SR0 R9,R8\n"
                      "       LD R10,R0,R1\n"
                      "       ST R10,R0,R2\n"
                      "       PUSH R10\n"
                      "       POP R11\n"
                      "       JMPD START\n"
                      "       HALT\n";
    const std::vector<std::uint16_t> want = {
        0xC120, 0xD100, 0x8101, 0x9101, 0xA1FF, 0xB110, 0x0211, 0x1321, 0x2432, 0x3543,
        0x4654, 0x7760, 0x7871, 0x7983, 0x5A01, 0x6A02, 0x7A06, 0x7B07, 0xE3ED, 0xF800,
    };
    Assembly a = assemble(src);
    CHECK(a.image.origin == 0);
    REQUIRE(a.image.words == want);
    CHECK(a.listing.find("0000  C120") != std::string::npos);
}

TEST_CASE("assembler directives, numbers and labels") {
    SUBCASE("origin and data words") {
        Assembly a = assemble(".org 0x10\nTBL: .word 1, 02h, 3, TBL\n");
        CHECK(a.image.origin == 0x10);
        REQUIRE(a.image.words == std::vector<std::uint16_t>{1, 2, 3, 0x10});
    }
    SUBCASE("number notations agree") {
        Assembly dec = assemble("LDL R1,#32\n");
        Assembly hex = assemble("LDL R1,#0x20\n");
        Assembly suf = assemble("LDL R1,#20h\n");
        CHECK(dec.image.words == hex.image.words);
        CHECK(suf.image.words == hex.image.words);
    }
    SUBCASE("negative immediates occupy the same byte") {
        Assembly neg = assemble("ADDI R1,#-1\n");
        Assembly pos = assemble("ADDI R1,#255\n");
        CHECK(neg.image.words == pos.image.words);
    }
    SUBCASE("gaps between sections are zero-filled") {
        Assembly a = assemble("NOP\n.org 4\nHALT\n");
        REQUIRE(a.image.words.size() == 5);
        CHECK(a.image.words[0] == 0x700F);
        CHECK(a.image.words[1] == 0);
        CHECK(a.image.words[2] == 0);
        CHECK(a.image.words[3] == 0);
        CHECK(a.image.words[4] == 0xF800);
    }
    SUBCASE("case-insensitive mnemonics, registers and several labels per line") {
        Assembly a = assemble("one: two: nop\n jmpd one\n");
        CHECK(a.image.words.size() == 2);
        CHECK(a.image.words[1] == 0xE3FE); // back two words
    }
}

TEST_CASE("assembler reports errors with line numbers") {
    struct Case {
        const char* src;
        const char* needle;
    };
    const Case cases[] = {
        {"NOP\nFROB R1\n", "line 2"},
        {"NOP\nFROB R1\n", "unknown mnemonic"},
        {"ADD R1,R2\n", "operand"},
        {"ADDI R1,#300\n", "range"},
        {"ADDI R1,#-129\n", "range"},
        {"JMPD 600\n", "range"},
        {"X: NOP\nX: NOP\n", "duplicate label"},
        {".org 8\nNOP\n.org 2\n", "backward"},
        {".org 0x3FF\n.word 1, 2\n", "1024"},
        {"ADD R16,R1,R2\n", "register"},
        {"LDL R1,#0xZZ\n", "immediate"},
        {"PUSH R1,R2\n", "operand"},
        {"JMPD NOWHERE\n", "label"},
        {".org TBL\nNOP\n", ".org"},
    };
    for (const Case& c : cases) {
        INFO(c.src);
        try {
            assemble(c.src);
            FAIL_CHECK("expected an error");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            INFO(msg);
            CHECK(msg.find(c.needle) != std::string::npos);
        }
    }
}

TEST_CASE("object text round trips") {
    SUBCASE("simple parse") {
        ObjectImage img = parse_object("@0000\n1234\n; note\nABCD\n");
        CHECK(img.origin == 0);
        REQUIRE(img.words == std::vector<std::uint16_t>{0x1234, 0xABCD});
    }
    SUBCASE("sections and gap fill") {
        ObjectImage img = parse_object("@0010\nAAAA\n@0014\nBBBB\n");
        CHECK(img.origin == 0x10);
        REQUIRE(img.words == std::vector<std::uint16_t>{0xAAAA, 0, 0, 0, 0xBBBB});
    }
    SUBCASE("format/parse identity on random images") {
        std::mt19937_64 rng(123);
        for (int trial = 0; trial < 200; ++trial) {
            ObjectImage img;
            img.origin = static_cast<std::uint16_t>(rng() % 512);
            const std::size_t n = 1 + rng() % (kLocalWords - img.origin);
            for (std::size_t k = 0; k < n; ++k)
                img.words.push_back(static_cast<std::uint16_t>(rng()));
            ObjectImage back = parse_object(format_object(img));
            REQUIRE(back == img);
        }
    }
    SUBCASE("assembler output survives the object format") {
        Assembly a = assemble(".org 0x20\nL: ADDI R1,#1\nJMPD L\nHALT\n");
        ObjectImage back = parse_object(format_object(a.image));
        REQUIRE(back == a.image);
    }
    SUBCASE("rejects malformed text") {
        CHECK_THROWS_AS(parse_object("ZZZZ\n"), ParseError);
        CHECK_THROWS_AS(parse_object("@0010\nAAAA\n@0005\nBBBB\n"), ParseError); // backward
        CHECK_THROWS_AS(parse_object("12345\n"), ParseError);                   // too wide
        CHECK_THROWS_AS(parse_object("@03FF\nAAAA\nBBBB\n"), ParseError);       // overflow
    }
}

TEST_CASE("disassembly is assembler-compatible") {
    SUBCASE("goldens") {
        CHECK(disassemble(0x0211) == "ADD R2, R1, R1");
        CHECK(disassemble(0xE3FF) == "JMPD -1");
        CHECK(disassemble(0xF800) == "HALT");
        CHECK(disassemble(0xC120) == "LDL R1, #32");
        CHECK(disassemble(0x7760) == "NOT R7, R6");
        CHECK(disassemble(0xFC00) == ".word 0xFC00 ; undefined");
    }
    SUBCASE("assembling a disassembled word reproduces it") {
        for (std::uint32_t w = 0; w <= 0xFFFF; w += 7) {
            const auto inst = decode(static_cast<std::uint16_t>(w));
            if (!inst) continue;
            Assembly a = assemble(disassemble(static_cast<std::uint16_t>(w)) + "\n");
            REQUIRE(a.image.words.size() == 1);
            REQUIRE(a.image.words[0] == w);
        }
    }
}
