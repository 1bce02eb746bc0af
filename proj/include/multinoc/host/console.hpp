// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multinoc/system/system.hpp"

namespace multinoc::host {

// One console line, parsed. Two accepted spellings:
//   raw hex bytes forming one serial frame:  "00 01 01 00 20"
//   mnemonic form:                           "read 1 1 0x0020"
struct ConsoleCommand {
    enum class Kind : std::uint8_t { Sync, Read, Write, Activate, ScanfReply, Load, Run, Quit };
    Kind kind = Kind::Sync;
    int core = 0;
    int count = 0;                    // read
    std::uint16_t addr = 0;           // read/write
    std::vector<std::uint16_t> words; // write
    std::uint16_t word = 0;           // scanf_reply
    std::string path;                 // load
    std::uint64_t cycles = 0;         // run
};

// Throws ParseError naming the offending token for malformed lines,
// truncated frames and unknown opcodes.
ConsoleCommand parse_console_line(const std::string& text);
std::string render_command(const ConsoleCommand& cmd);

// One platform-to-host happening, labeled with the core it came from.
struct MonitorEvent {
    enum class Kind : std::uint8_t { Printf, ScanfRequest, ReadReturn, Diagnostic };
    Kind kind = Kind::Printf;
    int core = -1;                    // -1 for session-level diagnostics
    std::uint16_t word = 0;           // printf payload
    std::uint16_t addr = 0;           // read_return
    std::vector<std::uint16_t> words; // read_return payload
    std::string note;                 // diagnostics
};
std::string to_string(const MonitorEvent& e);

// The host side of the serial line: frames out, monitor events in. All
// simulation time is driven explicitly from here; identical command
// sequences against identical systems produce identical event logs.
class Session {
public:
    struct Options {
        std::uint64_t response_timeout = 100'000; // cycles to wait for a reply
    };

    explicit Session(system::System& sys);
    Session(system::System& sys, Options opt);

    bool synced() const { return synced_; }
    system::System& system() { return sys_; }

    // Execute one command; returns the events that surfaced while it ran.
    // Commands other than sync throw DomainError until the line is synced.
    std::vector<MonitorEvent> execute(const ConsoleCommand& cmd);

    // Advance the simulator, decoding host-bound bytes into events.
    std::vector<MonitorEvent> run_cycles(std::uint64_t n);

    // Run until an event of `kind` from `core` is pending (consuming it) or
    // the response timeout expires (returning nullopt).
    std::optional<MonitorEvent> wait_event(MonitorEvent::Kind kind, int core);

    // Oldest pending event of this kind/core, if already decoded.
    std::optional<MonitorEvent> take_event(MonitorEvent::Kind kind, int core);

    std::size_t pending_events() const { return pending_.size(); }
    const std::vector<MonitorEvent>& log() const { return log_; }

private:
    void send_frame(const std::vector<std::uint8_t>& frame);
    void pump();                       // drain host bytes, decode frames
    void push_event(MonitorEvent e);
    std::vector<MonitorEvent> collect(); // new events since the last collect
    void drive(std::uint64_t n);         // n cycles, stopping at quiescence
    void drive_wire();                   // until the bridge swallowed our bytes

    system::System& sys_;
    Options opt_;
    bool synced_ = false;
    std::vector<std::uint8_t> rx_;     // partial host-side frame
    std::deque<MonitorEvent> pending_; // decoded, not yet consumed by waits
    std::vector<MonitorEvent> log_;    // everything, in arrival order
    std::size_t collected_ = 0;        // log_ prefix already handed out
    std::size_t trace_seen_ = 0;       // platform trace prefix already mirrored
};

// Scripted sessions: console lines plus `expect` assertions.
//   expect printf <core> <word>
//   expect scanf <core>
//   expect read_return <core> <addr> <word...>
//   expect diag <substring>
// Transcript lines: "> command", "< event", "= ok|FAIL ...".
struct ScriptResult {
    std::string transcript;
    int failures = 0;
    bool ok() const { return failures == 0; }
};

ScriptResult run_script(const std::string& text, Session& session);
ScriptResult run_script_file(const std::string& path, Session& session);

} // namespace multinoc::host
