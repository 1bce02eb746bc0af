// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multinoc/host/console.hpp"

namespace multinoc::host {

// Grayscale images as plain matrices of 8-bit pixel values.
using Matrix = std::vector<std::vector<std::uint16_t>>;

// Plain-text form: one row per line, decimal pixels separated by spaces.
// Ragged rows, empty images and values above 255 are ParseErrors.
Matrix parse_matrix(const std::string& text);
std::string format_matrix(const Matrix& img);

// The gradient the platform computes, evaluated host-side: the sum of the
// absolute horizontal and vertical central differences, edges clamped.
Matrix edge_reference(const Matrix& img);

// Assembly for the row-at-a-time gradient kernel the processors run.
const std::string& edge_kernel_source();

// Where the host places each row inside a worker's local memory, and the
// widest row the windows allow without overlapping one another.
inline constexpr std::uint16_t kEdgeRowAbove = 0x100;
inline constexpr std::uint16_t kEdgeRowPadded = 0x180; // width + 2 words
inline constexpr std::uint16_t kEdgeRowBelow = 0x200;
inline constexpr std::uint16_t kEdgeRowOut = 0x280;
inline constexpr std::size_t kEdgeMaxWidth = 120;

// Run the gradient over the platform behind `session`: load the kernel into
// the processors on first use, hand out rows round-robin, and collect the
// computed rows back over the serial line. Throws DomainError when the
// image is empty, wider than kEdgeMaxWidth, has pixels above 255, or the
// platform has no processor tiles.
Matrix edge_detect_demo(const Matrix& img, Session& session);

} // namespace multinoc::host
