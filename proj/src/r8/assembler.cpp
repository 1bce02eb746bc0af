// SPDX-License-Identifier: Apache-2.0
#include "multinoc/r8/assembler.hpp"

#include <cctype>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace multinoc::r8 {

namespace {

struct Token {
    std::string text;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg, line);
}

std::string upper(std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
}

std::optional<Opcode> opcode_by_name(const std::string& name) {
    std::string u = upper(name);
    for (int i = 0; i < kOpcodeCount; ++i) {
        auto op = static_cast<Opcode>(i);
        if (u == mnemonic(op)) return op;
    }
    return std::nullopt;
}

std::optional<int> parse_register(const std::string& tok) {
    if (tok.size() < 2 || (tok[0] != 'R' && tok[0] != 'r')) return std::nullopt;
    int v = 0;
    for (std::size_t i = 1; i < tok.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return std::nullopt;
        v = v * 10 + (tok[i] - '0');
        if (v > 15) return std::nullopt;
    }
    return v;
}

// Decimal, 0x hex, or trailing-h hex; optional sign and '#' prefix.
std::optional<long> parse_number(std::string tok) {
    if (!tok.empty() && tok[0] == '#') tok.erase(0, 1);
    if (tok.empty()) return std::nullopt;
    bool neg = false;
    if (tok[0] == '+' || tok[0] == '-') {
        neg = tok[0] == '-';
        tok.erase(0, 1);
        if (tok.empty()) return std::nullopt;
    }
    int base = 10;
    if (tok.size() > 2 && (tok.compare(0, 2, "0x") == 0 || tok.compare(0, 2, "0X") == 0)) {
        base = 16;
        tok.erase(0, 2);
    } else if (tok.back() == 'h' || tok.back() == 'H') {
        base = 16;
        tok.pop_back();
    }
    if (tok.empty()) return std::nullopt;
    long v = 0;
    for (char ch : tok) {
        int d;
        if (ch >= '0' && ch <= '9') d = ch - '0';
        else if (base == 16 && ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
        else if (base == 16 && ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
        else
            return std::nullopt;
        v = v * base + d;
        if (v > 0x1FFFF) return std::nullopt;
    }
    return neg ? -v : v;
}

bool valid_label(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
    return true;
}

struct Statement {
    int line = 0;
    std::string source;              // original text for the listing
    std::vector<std::string> labels; // labels defined on this line
    std::string head;                // mnemonic or directive, empty if none
    std::vector<std::string> args;
    std::uint16_t address = 0;
};

std::vector<Statement> scan(const std::string& source) {
    std::vector<Statement> out;
    std::istringstream in(source);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        Statement st;
        st.line = line_no;
        std::string text = raw;
        if (auto semi = text.find(';'); semi != std::string::npos) text.erase(semi);
        for (char& ch : text)
            if (ch == '\t' || ch == '\r') ch = ' ';
        st.source = raw;

        // Peel "label:" prefixes.
        std::size_t pos = 0;
        while (true) {
            std::size_t start = text.find_first_not_of(' ', pos);
            if (start == std::string::npos) {
                pos = text.size();
                break;
            }
            std::size_t colon = text.find(':', start);
            std::size_t space = text.find(' ', start);
            if (colon == std::string::npos || (space != std::string::npos && space < colon)) {
                pos = start;
                break;
            }
            std::string label = text.substr(start, colon - start);
            if (!valid_label(label)) fail(line_no, "bad label '" + label + "'");
            st.labels.push_back(label);
            pos = colon + 1;
        }

        // Head token and comma/space separated arguments.
        std::istringstream rest(text.substr(pos));
        std::string head;
        if (rest >> head) {
            st.head = head;
            std::string tail;
            std::getline(rest, tail);
            std::string arg;
            for (char ch : tail) {
                if (ch == ',' || ch == ' ') {
                    if (!arg.empty()) st.args.push_back(arg);
                    arg.clear();
                } else {
                    arg += ch;
                }
            }
            if (!arg.empty()) st.args.push_back(arg);
        }
        out.push_back(std::move(st));
    }
    return out;
}

} // namespace

Assembly assemble(const std::string& source) {
    std::vector<Statement> stmts = scan(source);
    std::map<std::string, std::uint16_t> labels;

    // Pass 1: addresses and labels.
    std::uint32_t counter = 0;
    bool emitted = false;
    std::uint16_t origin = 0;
    for (Statement& st : stmts) {
        if (counter > kLocalWords) fail(st.line, "image exceeds the 1024-word local memory");
        for (const std::string& l : st.labels) {
            if (labels.count(l)) fail(st.line, "duplicate label '" + l + "'");
            labels[l] = static_cast<std::uint16_t>(counter);
        }
        st.address = static_cast<std::uint16_t>(counter);
        if (st.head.empty()) continue;
        std::string head = upper(st.head);
        if (head == ".ORG") {
            if (st.args.size() != 1) fail(st.line, ".org takes one value");
            auto v = parse_number(st.args[0]);
            if (!v || *v < 0 || *v >= kLocalWords) fail(st.line, "bad .org address");
            if (static_cast<std::uint32_t>(*v) < counter)
                fail(st.line, ".org may not move backward");
            counter = static_cast<std::uint32_t>(*v);
            st.address = static_cast<std::uint16_t>(counter);
            for (const std::string& l : st.labels) labels[l] = st.address;
            if (!emitted) origin = st.address;
            continue;
        }
        if (head == ".WORD") {
            if (st.args.empty()) fail(st.line, ".word needs at least one value");
            if (!emitted) {
                origin = st.address;
                emitted = true;
            }
            counter += st.args.size();
            continue;
        }
        if (!opcode_by_name(head)) fail(st.line, "unknown mnemonic '" + st.head + "'");
        if (!emitted) {
            origin = st.address;
            emitted = true;
        }
        counter += 1;
    }
    if (counter > kLocalWords)
        fail(stmts.empty() ? 1 : stmts.back().line, "image exceeds the 1024-word local memory");

    // Pass 2: encode.
    Assembly result;
    result.image.origin = origin;
    std::ostringstream listing;
    auto emit = [&](std::uint16_t addr, std::uint16_t word, const Statement& st) {
        std::size_t index = addr - result.image.origin;
        if (result.image.words.size() < index) result.image.words.resize(index, 0);
        result.image.words.push_back(word);
        listing << std::hex << std::uppercase << std::setw(4) << std::setfill('0') << addr << "  "
                << std::setw(4) << std::setfill('0') << word << "  " << st.source << '\n';
    };

    auto number_or_label = [&](const Statement& st, const std::string& tok) -> long {
        if (auto v = parse_number(tok)) return *v;
        if (labels.count(tok)) return labels[tok];
        fail(st.line, "unknown value '" + tok + "'");
    };

    for (const Statement& st : stmts) {
        if (st.head.empty()) continue;
        std::string head = upper(st.head);
        if (head == ".ORG") continue;
        if (head == ".WORD") {
            std::uint16_t addr = st.address;
            for (const std::string& a : st.args) {
                long v = number_or_label(st, a);
                if (v < -0x8000 || v > 0xFFFF) fail(st.line, "word value out of range");
                emit(addr++, static_cast<std::uint16_t>(v & 0xFFFF), st);
            }
            continue;
        }
        Opcode op = *opcode_by_name(head);
        Instruction inst;
        inst.op = op;
        auto want = [&](std::size_t n) {
            if (st.args.size() != n)
                fail(st.line, std::string(mnemonic(op)) + " takes " + std::to_string(n) +
                                  " operand(s), got " + std::to_string(st.args.size()));
        };
        auto reg = [&](const std::string& tok) {
            auto r = parse_register(tok);
            if (!r) fail(st.line, "expected a register, got '" + tok + "'");
            return static_cast<std::uint8_t>(*r);
        };
        switch (shape(op)) {
        case OperandShape::ThreeReg:
            want(3);
            inst.a = reg(st.args[0]);
            inst.b = reg(st.args[1]);
            inst.c = reg(st.args[2]);
            break;
        case OperandShape::TwoReg:
            want(2);
            inst.a = reg(st.args[0]);
            inst.b = reg(st.args[1]);
            break;
        case OperandShape::OneReg:
            want(1);
            inst.a = reg(st.args[0]);
            break;
        case OperandShape::None:
            want(0);
            break;
        case OperandShape::RegImm: {
            want(2);
            inst.a = reg(st.args[0]);
            auto v = parse_number(st.args[1]);
            if (!v) fail(st.line, "expected an immediate, got '" + st.args[1] + "'");
            if (*v < -128 || *v > 255) fail(st.line, "immediate out of range: " + st.args[1]);
            inst.imm = static_cast<std::uint8_t>(*v & 0xFF);
            break;
        }
        case OperandShape::Disp: {
            want(1);
            long target;
            if (auto v = parse_number(st.args[0])) {
                // Numeric displacements are taken literally.
                target = st.address + 1 + *v;
            } else if (labels.count(st.args[0])) {
                target = labels[st.args[0]];
            } else {
                fail(st.line, "unknown label '" + st.args[0] + "'");
            }
            long disp = target - (st.address + 1);
            if (disp < -512 || disp > 511)
                fail(st.line, "displacement out of range: " + std::to_string(disp));
            inst.disp = static_cast<int>(disp);
            break;
        }
        }
        emit(st.address, encode(inst), st);
    }
    result.listing = listing.str();
    return result;
}

} // namespace multinoc::r8
