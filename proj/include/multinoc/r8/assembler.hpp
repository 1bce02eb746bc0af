// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "multinoc/r8/object.hpp"

namespace multinoc::r8 {

// Assembly source grammar, one statement per line:
//   [label:] mnemonic operands    ; comment
//   [label:] .org value           ; move the location counter forward
//   [label:] .word v1, v2, ...    ; literal data words (numbers or labels)
// Registers are R0..R15 (case-insensitive). Immediates take an optional
// '#' prefix. Numbers are decimal, 0x-prefixed hex, or hex with a trailing
// 'h' (0FFFEh). Displacement operands are a label or a number; labels
// resolve relative to the address after the jump (two-pass).
struct Assembly {
    ObjectImage image;
    std::string listing; // address, word and source per emitted line
};

// Throws ParseError tagged with the line number on any grammar, range,
// label or overflow error.
Assembly assemble(const std::string& source);

} // namespace multinoc::r8
