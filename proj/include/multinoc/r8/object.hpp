// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multinoc/error.hpp"
#include "multinoc/r8/core.hpp"

namespace multinoc::r8 {

// Loadable program image: a dense run of words starting at `origin`.
// Must fit the 1024-word local memory.
struct ObjectImage {
    std::uint16_t origin = 0;
    std::vector<std::uint16_t> words;

    bool operator==(const ObjectImage&) const = default;
};

// Object text format: "@hhhh" lines move the load address forward, every
// other non-blank line is one 4-hex-digit word; ";" starts a comment.
// Gaps between sections are filled with zero words.
ObjectImage parse_object(const std::string& text);
ObjectImage load_object_file(const std::string& path);
std::string format_object(const ObjectImage& image);
void save_object_file(const ObjectImage& image, const std::string& path);

} // namespace multinoc::r8
