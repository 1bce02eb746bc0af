// SPDX-License-Identifier: Apache-2.0
#include "multinoc/host/edge_demo.hpp"

#include <cstdlib>
#include <sstream>

#include "multinoc/error.hpp"
#include "multinoc/r8/assembler.hpp"

namespace multinoc::host {

Matrix parse_matrix(const std::string& text) {
    Matrix img;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::vector<std::uint16_t> pixels;
        std::string tok;
        while (row >> tok) {
            if (tok[0] == '#')
                break;
            char* end = nullptr;
            long v = std::strtol(tok.c_str(), &end, 10);
            if (*end != '\0' || v < 0)
                throw ParseError("bad pixel value '" + tok + "'");
            if (v > 255)
                throw ParseError("pixel value " + tok + " does not fit in 8 bits");
            pixels.push_back(static_cast<std::uint16_t>(v));
        }
        if (pixels.empty())
            continue; // blank or comment-only line
        if (!img.empty() && pixels.size() != img.front().size())
            throw ParseError("ragged image: row " + std::to_string(img.size() + 1) +
                             " has " + std::to_string(pixels.size()) + " pixels, first row has " +
                             std::to_string(img.front().size()));
        img.push_back(std::move(pixels));
    }
    if (img.empty())
        throw ParseError("the image has no rows");
    return img;
}

std::string format_matrix(const Matrix& img) {
    std::string out;
    for (const auto& row : img) {
        for (std::size_t x = 0; x < row.size(); ++x) {
            if (x)
                out += ' ';
            out += std::to_string(row[x]);
        }
        out += '\n';
    }
    return out;
}

Matrix edge_reference(const Matrix& img) {
    const std::size_t h = img.size(), w = img.empty() ? 0 : img.front().size();
    Matrix out(h, std::vector<std::uint16_t>(w, 0));
    auto diff = [](std::uint16_t a, std::uint16_t b) {
        return static_cast<std::uint16_t>(a > b ? a - b : b - a);
    };
    for (std::size_t y = 0; y < h; ++y) {
        const auto& prev = img[y == 0 ? 0 : y - 1];
        const auto& cur = img[y];
        const auto& next = img[y + 1 == h ? h - 1 : y + 1];
        for (std::size_t x = 0; x < w; ++x) {
            const std::uint16_t left = cur[x == 0 ? 0 : x - 1];
            const std::uint16_t right = cur[x + 1 == w ? w - 1 : x + 1];
            out[y][x] = static_cast<std::uint16_t>(diff(right, left) + diff(next[x], prev[x]));
        }
    }
    return out;
}

const std::string& edge_kernel_source() {
    static const std::string src = R"(; Row-at-a-time gradient kernel.
; The host parks three rows in local memory before answering the length
; request: the row above at 0x100, the current row at 0x180 padded with a
; copy of each end pixel (so index i-1 and i+1 never need clamping), and
; the row below at 0x200. Results go to 0x280. A length of zero stops.
start:  LDH  R6, #0xFF
        LDL  R6, #0xFF        ; R6 = 0xFFFF, the host I/O window
line:   LD   R1, R6, R0       ; ask the host for the row length
        ADDI R1, #0           ; loads leave flags alone; add 0 to test
        JMPZD done            ; zero length: no more rows
        LDH  R2, #0x01
        LDL  R2, #0x00        ; R2 = row above
        LDH  R3, #0x01
        LDL  R3, #0x80        ; R3 = padded current row
        LDH  R4, #0x02
        LDL  R4, #0x00        ; R4 = row below
        LDH  R5, #0x02
        LDL  R5, #0x80        ; R5 = output row
        XOR  R7, R7, R7       ; i = 0
pixel:  LD   R8, R4, R7       ; below[i]
        LD   R9, R2, R7       ; above[i]
        SUB  R10, R8, R9      ; vertical difference
        JMPND negy
        JMPD  goty
negy:   SUB  R10, R0, R10     ; make it positive
goty:   LD   R8, R3, R7       ; current[i-1] via the padding
        ADD  R9, R7, R0
        ADDI R9, #2
        LD   R9, R3, R9       ; current[i+1] via the padding
        SUB  R11, R9, R8      ; horizontal difference
        JMPND negx
        JMPD  gotx
negx:   SUB  R11, R0, R11
gotx:   ADD  R10, R10, R11    ; gradient magnitude, city-block style
        ST   R10, R5, R7
        ADDI R7, #1
        SUB  R8, R7, R1       ; carry set once i reaches the length
        JMPCD flush
        JMPD  pixel
flush:  ST   R1, R6, R0       ; echo the length: row finished
        JMPD  line
done:   HALT
)";
    return src;
}

namespace {

void write_words(Session& session, int core, std::uint16_t addr,
                 std::vector<std::uint16_t> words) {
    ConsoleCommand w;
    w.kind = ConsoleCommand::Kind::Write;
    w.core = core;
    w.addr = addr;
    w.words = std::move(words);
    session.execute(w);
}

std::vector<std::uint16_t> padded_row(const std::vector<std::uint16_t>& row) {
    std::vector<std::uint16_t> out;
    out.reserve(row.size() + 2);
    out.push_back(row.front());
    out.insert(out.end(), row.begin(), row.end());
    out.push_back(row.back());
    return out;
}

} // namespace

Matrix edge_detect_demo(const Matrix& img, Session& session) {
    const std::size_t h = img.size();
    if (h == 0 || img.front().empty())
        throw DomainError("the image has no pixels");
    const std::size_t w = img.front().size();
    if (w > kEdgeMaxWidth)
        throw DomainError("rows wider than " + std::to_string(kEdgeMaxWidth) +
                          " pixels do not fit the kernel's row windows");
    for (const auto& row : img) {
        if (row.size() != w)
            throw DomainError("ragged image");
        for (std::uint16_t p : row)
            if (p > 255)
                throw DomainError("pixel values are 8-bit");
    }

    system::System& sys = session.system();
    std::vector<int> workers = sys.core_map().processors();
    if (workers.empty())
        throw DomainError("this platform has no processor tiles to run the kernel");
    if (workers.size() > 2)
        workers.resize(2); // the kernel uses at most two line workers
    if (workers.size() > h)
        workers.resize(h); // never start a core that gets no line

    if (!session.synced()) {
        ConsoleCommand sync;
        sync.kind = ConsoleCommand::Kind::Sync;
        session.execute(sync);
    }

    const r8::ObjectImage kernel = r8::assemble(edge_kernel_source()).image;
    std::vector<bool> started(workers.size(), false);
    auto ensure_started = [&](std::size_t k) {
        if (started[k])
            return;
        write_words(session, workers[k], static_cast<std::uint16_t>(kernel.origin),
                    kernel.words);
        ConsoleCommand act;
        act.kind = ConsoleCommand::Kind::Activate;
        act.core = workers[k];
        session.execute(act);
        started[k] = true;
    };

    Matrix out(h, std::vector<std::uint16_t>(w, 0));
    auto dispatch = [&](std::size_t k, std::size_t y) {
        const int core = workers[k];
        ensure_started(k);
        if (!session.wait_event(MonitorEvent::Kind::ScanfRequest, core))
            throw DomainError("worker core " + std::to_string(core) +
                              " never asked for a row length");
        write_words(session, core, kEdgeRowAbove, img[y == 0 ? 0 : y - 1]);
        write_words(session, core, kEdgeRowPadded, padded_row(img[y]));
        write_words(session, core, kEdgeRowBelow, img[y + 1 == h ? h - 1 : y + 1]);
        ConsoleCommand reply;
        reply.kind = ConsoleCommand::Kind::ScanfReply;
        reply.core = core;
        reply.word = static_cast<std::uint16_t>(w);
        session.execute(reply);
    };
    auto collect = [&](std::size_t k, std::size_t y) {
        const int core = workers[k];
        auto done = session.wait_event(MonitorEvent::Kind::Printf, core);
        if (!done || done->word != w)
            throw DomainError("worker core " + std::to_string(core) +
                              " did not confirm row " + std::to_string(y));
        ConsoleCommand rd;
        rd.kind = ConsoleCommand::Kind::Read;
        rd.core = core;
        rd.count = static_cast<int>(w);
        rd.addr = kEdgeRowOut;
        auto events = session.execute(rd);
        for (const auto& e : events) {
            if (e.kind == MonitorEvent::Kind::ReadReturn && e.core == core) {
                if (e.words.size() != w)
                    throw DomainError("row readback came back the wrong size");
                out[y] = e.words;
                return;
            }
        }
        throw DomainError("no readback for row " + std::to_string(y));
    };

    // Rows go out round-robin; workers grind concurrently within a batch.
    for (std::size_t base = 0; base < h; base += workers.size()) {
        const std::size_t batch = std::min(workers.size(), h - base);
        for (std::size_t k = 0; k < batch; ++k)
            dispatch(k, base + k);
        for (std::size_t k = 0; k < batch; ++k)
            collect(k, base + k);
    }

    // Every worker is waiting for the next length; zero sends them to HALT.
    for (std::size_t k = 0; k < workers.size(); ++k) {
        if (!started[k])
            continue;
        if (!session.wait_event(MonitorEvent::Kind::ScanfRequest, workers[k]))
            throw DomainError("worker core " + std::to_string(workers[k]) +
                              " did not come back for more rows");
        ConsoleCommand reply;
        reply.kind = ConsoleCommand::Kind::ScanfReply;
        reply.core = workers[k];
        reply.word = 0;
        session.execute(reply);
    }
    session.run_cycles(10'000); // let the HALTs land; stops at quiescence

    return out;
}

} // namespace multinoc::host
