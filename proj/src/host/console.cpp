// SPDX-License-Identifier: Apache-2.0
#include "multinoc/host/console.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "multinoc/error.hpp"
#include "multinoc/ips/serial_ip.hpp"
#include "multinoc/r8/object.hpp"
#include "multinoc/services/service.hpp"

namespace multinoc::host {

namespace sf = ips::serial_frames;

namespace {

std::vector<std::string> tokens_of(const std::string& text) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : text) {
        if (c == '#' || c == ';')
            break; // comment to end of line
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            if (!cur.empty())
                toks.push_back(std::move(cur)), cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        toks.push_back(std::move(cur));
    return toks;
}

bool is_hex_pair(const std::string& t) {
    return t.size() == 2 && std::isxdigit(static_cast<unsigned char>(t[0])) &&
           std::isxdigit(static_cast<unsigned char>(t[1]));
}

long parse_number(const std::string& t, const char* what) {
    try {
        std::size_t used = 0;
        long v = std::stol(t, &used, 0); // 0x.. hex, otherwise decimal
        if (used != t.size())
            throw ParseError(std::string("bad ") + what + ": '" + t + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + ": '" + t + "'");
    }
}

int parse_core(const std::string& t) {
    long v = parse_number(t, "core id");
    if (v < 0 || v > 255)
        throw ParseError("core id out of range: '" + t + "'");
    return static_cast<int>(v);
}

std::uint16_t parse_word(const std::string& t, const char* what) {
    long v = parse_number(t, what);
    if (v < -0x8000L || v > 0xFFFFL)
        throw ParseError(std::string(what) + " out of range: '" + t + "'");
    return static_cast<std::uint16_t>(v & 0xFFFF);
}

ConsoleCommand parse_raw_frame(const std::vector<std::string>& toks) {
    std::vector<std::uint8_t> bytes;
    for (const auto& t : toks) {
        if (!is_hex_pair(t))
            throw ParseError("raw frames are two-digit hex bytes; got '" + t + "'");
        bytes.push_back(static_cast<std::uint8_t>(std::stoul(t, nullptr, 16)));
    }
    ConsoleCommand cmd;
    if (bytes.size() == 1 && bytes[0] == sf::kSync) {
        cmd.kind = ConsoleCommand::Kind::Sync;
        return cmd;
    }
    auto need = [&](std::size_t n) {
        if (bytes.size() < n)
            throw ParseError("truncated frame: got " + std::to_string(bytes.size()) +
                             " bytes, need " + std::to_string(n));
        if (bytes.size() > n)
            throw ParseError("frame too long: got " + std::to_string(bytes.size()) +
                             " bytes, need " + std::to_string(n));
    };
    switch (bytes[0]) {
    case sf::kRead:
        need(5);
        cmd.kind = ConsoleCommand::Kind::Read;
        cmd.core = bytes[1];
        cmd.count = bytes[2];
        cmd.addr = static_cast<std::uint16_t>((bytes[3] << 8) | bytes[4]);
        return cmd;
    case sf::kWrite: {
        if (bytes.size() < 7)
            throw ParseError("truncated frame: a write carries at least one word");
        std::size_t n = bytes[2];
        need(5 + 2 * n);
        cmd.kind = ConsoleCommand::Kind::Write;
        cmd.core = bytes[1];
        cmd.addr = static_cast<std::uint16_t>((bytes[3] << 8) | bytes[4]);
        for (std::size_t i = 0; i < n; ++i)
            cmd.words.push_back(
                static_cast<std::uint16_t>((bytes[5 + 2 * i] << 8) | bytes[6 + 2 * i]));
        return cmd;
    }
    case sf::kActivate:
        need(2);
        cmd.kind = ConsoleCommand::Kind::Activate;
        cmd.core = bytes[1];
        return cmd;
    case sf::kInputReply:
        need(4);
        cmd.kind = ConsoleCommand::Kind::ScanfReply;
        cmd.core = bytes[1];
        cmd.word = static_cast<std::uint16_t>((bytes[2] << 8) | bytes[3]);
        return cmd;
    default: {
        char buf[48];
        std::snprintf(buf, sizeof buf, "unknown frame opcode 0x%02X", bytes[0]);
        throw ParseError(buf);
    }
    }
}

} // namespace

ConsoleCommand parse_console_line(const std::string& text) {
    auto toks = tokens_of(text);
    if (toks.empty())
        throw ParseError("empty line");
    bool raw = true;
    for (const auto& t : toks)
        raw = raw && is_hex_pair(t);
    if (raw)
        return parse_raw_frame(toks);

    ConsoleCommand cmd;
    const std::string& op = toks[0];
    auto want = [&](std::size_t n, const char* usage) {
        if (toks.size() != n)
            throw ParseError(std::string("usage: ") + usage);
    };
    if (op == "sync") {
        want(1, "sync");
        cmd.kind = ConsoleCommand::Kind::Sync;
    } else if (op == "read") {
        want(4, "read <core> <count> <addr>");
        cmd.kind = ConsoleCommand::Kind::Read;
        cmd.core = parse_core(toks[1]);
        cmd.count = static_cast<int>(parse_number(toks[2], "word count"));
        cmd.addr = parse_word(toks[3], "address");
    } else if (op == "write") {
        if (toks.size() < 4)
            throw ParseError("usage: write <core> <addr> <word> [word ...]");
        cmd.kind = ConsoleCommand::Kind::Write;
        cmd.core = parse_core(toks[1]);
        cmd.addr = parse_word(toks[2], "address");
        for (std::size_t i = 3; i < toks.size(); ++i)
            cmd.words.push_back(parse_word(toks[i], "data word"));
    } else if (op == "activate") {
        want(2, "activate <core>");
        cmd.kind = ConsoleCommand::Kind::Activate;
        cmd.core = parse_core(toks[1]);
    } else if (op == "scanf_reply") {
        want(3, "scanf_reply <core> <word>");
        cmd.kind = ConsoleCommand::Kind::ScanfReply;
        cmd.core = parse_core(toks[1]);
        cmd.word = parse_word(toks[2], "reply word");
    } else if (op == "load") {
        want(3, "load <core> <object-path>");
        cmd.kind = ConsoleCommand::Kind::Load;
        cmd.core = parse_core(toks[1]);
        cmd.path = toks[2];
    } else if (op == "run") {
        want(2, "run <cycles>");
        cmd.kind = ConsoleCommand::Kind::Run;
        long v = parse_number(toks[1], "cycle count");
        if (v <= 0)
            throw ParseError("cycle count must be positive");
        cmd.cycles = static_cast<std::uint64_t>(v);
    } else if (op == "quit" || op == "exit") {
        want(1, "quit");
        cmd.kind = ConsoleCommand::Kind::Quit;
    } else {
        throw ParseError("unknown command '" + op + "'");
    }
    return cmd;
}

std::string render_command(const ConsoleCommand& cmd) {
    char buf[64];
    switch (cmd.kind) {
    case ConsoleCommand::Kind::Sync: return "sync";
    case ConsoleCommand::Kind::Read:
        std::snprintf(buf, sizeof buf, "read %d %d 0x%04X", cmd.core, cmd.count, cmd.addr);
        return buf;
    case ConsoleCommand::Kind::Write: {
        std::snprintf(buf, sizeof buf, "write %d 0x%04X", cmd.core, cmd.addr);
        std::string out = buf;
        for (std::uint16_t w : cmd.words) {
            std::snprintf(buf, sizeof buf, " 0x%04X", w);
            out += buf;
        }
        return out;
    }
    case ConsoleCommand::Kind::Activate:
        std::snprintf(buf, sizeof buf, "activate %d", cmd.core);
        return buf;
    case ConsoleCommand::Kind::ScanfReply:
        std::snprintf(buf, sizeof buf, "scanf_reply %d 0x%04X", cmd.core, cmd.word);
        return buf;
    case ConsoleCommand::Kind::Load: return "load " + std::to_string(cmd.core) + " " + cmd.path;
    case ConsoleCommand::Kind::Run: return "run " + std::to_string(cmd.cycles);
    case ConsoleCommand::Kind::Quit: return "quit";
    }
    return "?";
}

std::string to_string(const MonitorEvent& e) {
    char buf[64];
    switch (e.kind) {
    case MonitorEvent::Kind::Printf:
        std::snprintf(buf, sizeof buf, "printf core=%d word=0x%04X", e.core, e.word);
        return buf;
    case MonitorEvent::Kind::ScanfRequest:
        std::snprintf(buf, sizeof buf, "scanf core=%d", e.core);
        return buf;
    case MonitorEvent::Kind::ReadReturn: {
        std::snprintf(buf, sizeof buf, "read_return core=%d addr=0x%04X words=", e.core,
                      e.addr);
        std::string out = buf;
        for (std::size_t i = 0; i < e.words.size(); ++i) {
            std::snprintf(buf, sizeof buf, i ? " 0x%04X" : "0x%04X", e.words[i]);
            out += buf;
        }
        return out;
    }
    case MonitorEvent::Kind::Diagnostic:
        return "diag " + e.note;
    }
    return "?";
}

Session::Session(system::System& sys) : Session(sys, Options{}) {}

Session::Session(system::System& sys, Options opt) : sys_(sys), opt_(opt) {
    if (!sys_.serial())
        throw ConfigError("this platform has no serial bridge to talk to");
}

void Session::send_frame(const std::vector<std::uint8_t>& frame) { sys_.host_send(frame); }

void Session::push_event(MonitorEvent e) {
    pending_.push_back(e);
    log_.push_back(std::move(e));
}

void Session::pump() {
    // Mirror platform diagnostics (trace `diag` events) into the session so
    // scripts can assert on them alongside serial traffic.
    const auto& ev = sys_.trace().events;
    for (; trace_seen_ < ev.size(); ++trace_seen_) {
        if (ev[trace_seen_].kind != "diag")
            continue;
        MonitorEvent e;
        e.kind = MonitorEvent::Kind::Diagnostic;
        const std::string& d = ev[trace_seen_].detail; // "core=N msg=..."
        if (d.rfind("core=", 0) == 0) {
            std::size_t sp = d.find(' ');
            e.core = std::atoi(d.c_str() + 5);
            std::size_t msg = d.find("msg=", sp);
            e.note = msg == std::string::npos ? d : d.substr(msg + 4);
        } else {
            e.note = d;
        }
        push_event(std::move(e));
    }
    for (std::uint8_t b : sys_.host_take())
        rx_.push_back(b);
    for (;;) {
        if (rx_.empty())
            return;
        std::size_t need = 0;
        switch (rx_[0]) {
        case sf::kPrintf: need = 4; break;
        case sf::kScanf: need = 2; break;
        case sf::kReadReturn:
            need = rx_.size() < 3 ? 3 : 5 + 2 * static_cast<std::size_t>(rx_[2]);
            break;
        case sf::kError: need = 3; break;
        default: {
            // Cannot happen with this bridge; resynchronize defensively.
            char buf[64];
            std::snprintf(buf, sizeof buf, "unrecognised host-bound byte 0x%02X", rx_[0]);
            MonitorEvent e;
            e.kind = MonitorEvent::Kind::Diagnostic;
            e.note = buf;
            push_event(std::move(e));
            rx_.erase(rx_.begin());
            continue;
        }
        }
        if (rx_.size() < need)
            return;
        MonitorEvent e;
        switch (rx_[0]) {
        case sf::kPrintf:
            e.kind = MonitorEvent::Kind::Printf;
            e.core = rx_[1];
            e.word = static_cast<std::uint16_t>((rx_[2] << 8) | rx_[3]);
            break;
        case sf::kScanf:
            e.kind = MonitorEvent::Kind::ScanfRequest;
            e.core = rx_[1];
            break;
        case sf::kReadReturn:
            e.kind = MonitorEvent::Kind::ReadReturn;
            e.core = rx_[1];
            e.addr = static_cast<std::uint16_t>((rx_[3] << 8) | rx_[4]);
            for (std::size_t i = 0; i < rx_[2]; ++i)
                e.words.push_back(
                    static_cast<std::uint16_t>((rx_[5 + 2 * i] << 8) | rx_[6 + 2 * i]));
            break;
        case sf::kError: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "error frame code=%u detail=0x%02X", rx_[1],
                          rx_[2]);
            e.kind = MonitorEvent::Kind::Diagnostic;
            e.note = buf;
            break;
        }
        }
        rx_.erase(rx_.begin(), rx_.begin() + static_cast<std::ptrdiff_t>(need));
        push_event(std::move(e));
    }
}

std::vector<MonitorEvent> Session::collect() {
    std::vector<MonitorEvent> out(log_.begin() + static_cast<std::ptrdiff_t>(collected_),
                                  log_.end());
    collected_ = log_.size();
    return out;
}

void Session::drive(std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) {
        if (sys_.quiescent())
            break; // only fresh host bytes could change anything now
        sys_.cycle();
        pump();
    }
    pump();
}

// Advance until the serial bridge has swallowed the queued bytes and pushed
// any resulting packet into the fabric; compute beyond that is left to
// explicit `run` commands and to `expect` waits.
void Session::drive_wire() {
    auto* ser = sys_.serial();
    for (std::uint64_t i = 0; i < opt_.response_timeout; ++i) {
        if (ser->host_backlog() == 0 && ser->activity() != ips::IpActivity::Running)
            break;
        sys_.cycle();
        pump();
    }
    pump();
}

std::vector<MonitorEvent> Session::run_cycles(std::uint64_t n) {
    drive(n);
    return collect();
}

std::optional<MonitorEvent> Session::take_event(MonitorEvent::Kind kind, int core) {
    for (auto it = pending_.begin(); it != pending_.end(); ++it) {
        if (it->kind == kind && (core < 0 || it->core == core)) {
            MonitorEvent e = *it;
            pending_.erase(it);
            return e;
        }
    }
    return std::nullopt;
}

std::optional<MonitorEvent> Session::wait_event(MonitorEvent::Kind kind, int core) {
    pump();
    if (auto e = take_event(kind, core))
        return e;
    for (std::uint64_t waited = 0; waited < opt_.response_timeout; ++waited) {
        sys_.cycle();
        pump();
        if (auto e = take_event(kind, core))
            return e;
        if (sys_.quiescent())
            break; // only fresh host bytes could produce more events
    }
    return std::nullopt;
}

std::vector<MonitorEvent> Session::execute(const ConsoleCommand& cmd) {
    if (!synced_ && cmd.kind != ConsoleCommand::Kind::Sync)
        throw DomainError("the serial line is not synced yet; send `sync` first");
    const std::size_t mark = log_.size();

    switch (cmd.kind) {
    case ConsoleCommand::Kind::Sync:
        send_frame({sf::kSync});
        synced_ = true;
        drive_wire();
        break;
    case ConsoleCommand::Kind::Read: {
        send_frame({sf::kRead, static_cast<std::uint8_t>(cmd.core),
                    static_cast<std::uint8_t>(cmd.count),
                    static_cast<std::uint8_t>(cmd.addr >> 8),
                    static_cast<std::uint8_t>(cmd.addr & 0xFF)});
        std::uint64_t waited = 0;
        bool done = false;
        while (!done && waited < opt_.response_timeout) {
            sys_.cycle();
            pump();
            ++waited;
            for (std::size_t i = mark; i < log_.size() && !done; ++i) {
                const auto& e = log_[i];
                done = e.kind == MonitorEvent::Kind::ReadReturn && e.core == cmd.core;
                // A rejected frame never gets a data reply; stop on its error.
                done = done || (e.kind == MonitorEvent::Kind::Diagnostic &&
                                e.note.rfind("error frame", 0) == 0);
            }
        }
        if (!done) {
            MonitorEvent e;
            e.kind = MonitorEvent::Kind::Diagnostic;
            e.core = cmd.core;
            e.note = "timeout: no read reply after " + std::to_string(waited) + " cycles";
            push_event(std::move(e));
        }
        break;
    }
    case ConsoleCommand::Kind::Write: {
        if (cmd.words.empty() ||
            cmd.words.size() > static_cast<std::size_t>(services::kMaxServiceWords))
            throw DomainError("a write frame carries between 1 and 125 words");
        std::vector<std::uint8_t> f = {sf::kWrite, static_cast<std::uint8_t>(cmd.core),
                                       static_cast<std::uint8_t>(cmd.words.size()),
                                       static_cast<std::uint8_t>(cmd.addr >> 8),
                                       static_cast<std::uint8_t>(cmd.addr & 0xFF)};
        for (std::uint16_t w : cmd.words) {
            f.push_back(static_cast<std::uint8_t>(w >> 8));
            f.push_back(static_cast<std::uint8_t>(w & 0xFF));
        }
        send_frame(f);
        drive_wire();
        break;
    }
    case ConsoleCommand::Kind::Activate:
        send_frame({sf::kActivate, static_cast<std::uint8_t>(cmd.core)});
        drive_wire();
        break;
    case ConsoleCommand::Kind::ScanfReply:
        send_frame({sf::kInputReply, static_cast<std::uint8_t>(cmd.core),
                    static_cast<std::uint8_t>(cmd.word >> 8),
                    static_cast<std::uint8_t>(cmd.word & 0xFF)});
        drive_wire();
        break;
    case ConsoleCommand::Kind::Load: {
        // A load is sugar for write commands covering the image.
        r8::ObjectImage img = r8::load_object_file(cmd.path);
        std::size_t at = 0;
        while (at < img.words.size()) {
            std::size_t n = std::min<std::size_t>(services::kMaxServiceWords,
                                                  img.words.size() - at);
            ConsoleCommand w;
            w.kind = ConsoleCommand::Kind::Write;
            w.core = cmd.core;
            w.addr = static_cast<std::uint16_t>(img.origin + at);
            w.words.assign(img.words.begin() + static_cast<std::ptrdiff_t>(at),
                           img.words.begin() + static_cast<std::ptrdiff_t>(at + n));
            execute(w);
            at += n;
        }
        break;
    }
    case ConsoleCommand::Kind::Run:
        drive(cmd.cycles);
        break;
    case ConsoleCommand::Kind::Quit: break;
    }
    pump();
    collected_ = log_.size();
    return std::vector<MonitorEvent>(log_.begin() + static_cast<std::ptrdiff_t>(mark),
                                     log_.end());
}

namespace {

struct Expect {
    MonitorEvent::Kind kind;
    int core = -1;
    bool has_word = false;
    std::uint16_t word = 0;
    std::uint16_t addr = 0;
    std::vector<std::uint16_t> words; // read_return payload
    std::string substring;            // diag
};

Expect parse_expect(const std::vector<std::string>& toks, const std::string& line) {
    if (toks.size() < 2)
        throw ParseError("usage: expect printf|scanf|read_return|diag ...");
    Expect ex;
    const std::string& kind = toks[1];
    if (kind == "printf") {
        if (toks.size() != 4)
            throw ParseError("usage: expect printf <core> <word>");
        ex.kind = MonitorEvent::Kind::Printf;
        ex.core = parse_core(toks[2]);
        ex.word = parse_word(toks[3], "word");
        ex.has_word = true;
    } else if (kind == "scanf") {
        if (toks.size() != 3)
            throw ParseError("usage: expect scanf <core>");
        ex.kind = MonitorEvent::Kind::ScanfRequest;
        ex.core = parse_core(toks[2]);
    } else if (kind == "read_return") {
        if (toks.size() < 5)
            throw ParseError("usage: expect read_return <core> <addr> <word...>");
        ex.kind = MonitorEvent::Kind::ReadReturn;
        ex.core = parse_core(toks[2]);
        ex.addr = parse_word(toks[3], "address");
        for (std::size_t i = 4; i < toks.size(); ++i)
            ex.words.push_back(parse_word(toks[i], "data word"));
    } else if (kind == "diag") {
        auto pos = line.find("diag");
        ex.kind = MonitorEvent::Kind::Diagnostic;
        ex.substring = line.substr(pos + 5);
        while (!ex.substring.empty() && ex.substring.back() == ' ')
            ex.substring.pop_back();
        if (ex.substring.empty())
            throw ParseError("usage: expect diag <substring>");
    } else {
        throw ParseError("unknown expectation '" + kind + "'");
    }
    return ex;
}

} // namespace

ScriptResult run_script(const std::string& text, Session& session) {
    ScriptResult res;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos)
            continue;
        std::string body = line.substr(start);
        if (body[0] == '#')
            continue;
        res.transcript += "> " + body + "\n";
        auto toks = tokens_of(body);
        if (!toks.empty() && toks[0] == "expect") {
            // A missed expectation is a recorded failure, not a fatal one.
            try {
                Expect ex = parse_expect(toks, body);
                auto got = session.wait_event(ex.kind, ex.core);
                if (!got) {
                    res.transcript += "= FAIL: no such event before timeout\n";
                    ++res.failures;
                    continue;
                }
                bool match = true;
                if (ex.kind == MonitorEvent::Kind::Printf)
                    match = got->word == ex.word;
                else if (ex.kind == MonitorEvent::Kind::ReadReturn)
                    match = got->addr == ex.addr && got->words == ex.words;
                else if (ex.kind == MonitorEvent::Kind::Diagnostic)
                    match = got->note.find(ex.substring) != std::string::npos;
                res.transcript += "< " + to_string(*got) + "\n";
                if (match) {
                    res.transcript += "= ok\n";
                } else {
                    res.transcript += "= FAIL: wanted `" + body + "`\n";
                    ++res.failures;
                }
            } catch (const Error& err) {
                res.transcript += std::string("= ERROR: ") + err.what() + "\n";
                ++res.failures;
            }
            continue;
        }
        // A command that cannot be parsed or sent leaves the script in an
        // unknown state; stop rather than run the remainder against it.
        try {
            ConsoleCommand cmd = parse_console_line(body);
            for (const auto& e : session.execute(cmd))
                res.transcript += "< " + to_string(e) + "\n";
            if (cmd.kind == ConsoleCommand::Kind::Quit)
                break;
        } catch (const Error& err) {
            res.transcript += std::string("= ERROR: ") + err.what() + "\n";
            ++res.failures;
            break;
        }
    }
    return res;
}

ScriptResult run_script_file(const std::string& path, Session& session) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open script: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return run_script(ss.str(), session);
}

} // namespace multinoc::host
