// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "multinoc/error.hpp"
#include "multinoc/host/console.hpp"
#include "multinoc/host/edge_demo.hpp"
#include "multinoc/r8/assembler.hpp"
#include "multinoc/r8/object.hpp"
#include "multinoc/system/config.hpp"
#include "multinoc/system/system.hpp"

using namespace multinoc;
namespace sys = multinoc::system;
using host::ConsoleCommand;
using host::MonitorEvent;

namespace {

r8::ObjectImage program(const std::string& src) { return r8::assemble(src).image; }

// Prints 0xAB once and stops.
const char* kPrintfProgram = "LDH R1, #0xFF\n"
                             "LDL R1, #0xFF\n"
                             "LDL R2, #0xAB\n"
                             "ST R2, R1, R0\n"
                             "HALT\n";

// Prints 0x11, 0x22, 0x33 in that order.
const char* kTriplePrintProgram = "LDH R1, #0xFF\n"
                                  "LDL R1, #0xFF\n"
                                  "LDL R2, #0x11\n"
                                  "ST R2, R1, R0\n"
                                  "LDL R2, #0x22\n"
                                  "ST R2, R1, R0\n"
                                  "LDL R2, #0x33\n"
                                  "ST R2, R1, R0\n"
                                  "HALT\n";

// Asks the host for a word and prints it plus one.
const char* kEchoPlusOneProgram = "LDH R1, #0xFF\n"
                                  "LDL R1, #0xFF\n"
                                  "LD R2, R1, R0\n"
                                  "ADDI R2, #1\n"
                                  "ST R2, R1, R0\n"
                                  "HALT\n";

// Stores 42 into shared memory, reads it back, keeps a local copy at 0.
const char* kStore42Program = "LDH R1, #0x08\n"
                              "LDL R2, #42\n"
                              "ST R2, R1, R0\n"
                              "LD R3, R1, R0\n"
                              "ST R3, R0, R0\n"
                              "HALT\n";

sys::System make_default_system(sys::SystemConfig cfg = {}) { return sys::System(std::move(cfg)); }

host::Matrix test_image_8x8() {
    host::Matrix img(8, std::vector<std::uint16_t>(8, 0));
    for (std::size_t y = 0; y < 8; ++y)
        for (std::size_t x = 0; x < 8; ++x)
            img[y][x] = static_cast<std::uint16_t>((7 * x + 13 * y + (x * y) % 5) % 256);
    return img;
}

bool has_event(const std::vector<MonitorEvent>& evs, MonitorEvent::Kind kind, int core) {
    for (const auto& e : evs)
        if (e.kind == kind && e.core == core)
            return true;
    return false;
}

} // namespace

TEST_CASE("console lines parse in raw and mnemonic form") {
    // The raw form is the byte sequence the wire itself carries.
    ConsoleCommand raw = host::parse_console_line("00 01 01 00 20");
    CHECK(raw.kind == ConsoleCommand::Kind::Read);
    CHECK(raw.core == 1);
    CHECK(raw.count == 1);
    CHECK(raw.addr == 0x0020);

    ConsoleCommand mnem = host::parse_console_line("read 1 1 0x0020");
    CHECK(mnem.kind == raw.kind);
    CHECK(mnem.core == raw.core);
    CHECK(mnem.count == raw.count);
    CHECK(mnem.addr == raw.addr);
    CHECK(host::render_command(raw) == host::render_command(mnem));

    ConsoleCommand sync = host::parse_console_line("55");
    CHECK(sync.kind == ConsoleCommand::Kind::Sync);
    CHECK(host::parse_console_line("sync").kind == ConsoleCommand::Kind::Sync);

    ConsoleCommand wr = host::parse_console_line("01 03 02 00 10 00 2a 00 2b");
    CHECK(wr.kind == ConsoleCommand::Kind::Write);
    CHECK(wr.core == 3);
    CHECK(wr.addr == 0x0010);
    CHECK(wr.words == std::vector<std::uint16_t>{0x2A, 0x2B});
    CHECK(host::render_command(wr) == "write 3 0x0010 0x002A 0x002B");

    ConsoleCommand wm = host::parse_console_line("write 3 0x10 42 0x2B");
    CHECK(wm.words == std::vector<std::uint16_t>{42, 0x2B});

    ConsoleCommand act = host::parse_console_line("02 01");
    CHECK(act.kind == ConsoleCommand::Kind::Activate);
    CHECK(act.core == 1);
    CHECK(host::parse_console_line("activate 1").core == 1);

    ConsoleCommand rep = host::parse_console_line("03 01 00 41");
    CHECK(rep.kind == ConsoleCommand::Kind::ScanfReply);
    CHECK(rep.core == 1);
    CHECK(rep.word == 0x0041);
    CHECK(host::parse_console_line("scanf_reply 1 0x41").word == 0x41);

    ConsoleCommand ld = host::parse_console_line("load 2 build/prog.obj");
    CHECK(ld.kind == ConsoleCommand::Kind::Load);
    CHECK(ld.core == 2);
    CHECK(ld.path == "build/prog.obj");

    CHECK(host::parse_console_line("run 100").cycles == 100);
    CHECK(host::parse_console_line("quit").kind == ConsoleCommand::Kind::Quit);

    // Comments vanish; a trailing comment leaves the command intact.
    CHECK(host::parse_console_line("read 1 1 0x20 # row buffer").addr == 0x20);

    CHECK_THROWS_AS(host::parse_console_line("00 01"), ParseError);        // truncated
    CHECK_THROWS_AS(host::parse_console_line("01 03 02 00 10 00 2a"), ParseError);
    CHECK_THROWS_AS(host::parse_console_line("07 01"), ParseError);        // unknown opcode
    CHECK_THROWS_AS(host::parse_console_line("frobnicate 1"), ParseError); // unknown word
    CHECK_THROWS_AS(host::parse_console_line(""), ParseError);
    CHECK_THROWS_AS(host::parse_console_line("# only a comment"), ParseError);
    CHECK_THROWS_AS(host::parse_console_line("read 1 1"), ParseError);     // missing addr
    CHECK_THROWS_AS(host::parse_console_line("read 999 1 0"), ParseError); // core range
    CHECK_THROWS_AS(host::parse_console_line("run 0"), ParseError);
    CHECK_THROWS_AS(host::parse_console_line("run -5"), ParseError);
    CHECK_THROWS_AS(host::parse_console_line("read one 1 0"), ParseError);

    // Rendered commands parse back to themselves.
    for (const char* line : {"read 1 2 0x0040", "write 3 0x0010 0x002A", "activate 2",
                             "scanf_reply 1 0x0007", "run 50", "sync", "quit"}) {
        ConsoleCommand c = host::parse_console_line(line);
        CHECK(host::render_command(host::parse_console_line(host::render_command(c))) ==
              host::render_command(c));
    }
}

TEST_CASE("a session reads back what it wrote") {
    sys::System s = make_default_system();
    host::Session session(s);
    CHECK_FALSE(session.synced());

    // Commands are rejected until the line is synced.
    CHECK_THROWS_AS(session.execute(host::parse_console_line("read 3 1 0x0000")), DomainError);

    auto none = session.execute(host::parse_console_line("sync"));
    CHECK(session.synced());
    CHECK(none.empty());

    session.execute(host::parse_console_line("write 3 0x0010 0x2A 0x2B"));
    auto evs = session.execute(host::parse_console_line("read 3 2 0x0010"));
    REQUIRE(evs.size() == 1);
    CHECK(evs[0].kind == MonitorEvent::Kind::ReadReturn);
    CHECK(evs[0].core == 3);
    CHECK(evs[0].addr == 0x0010);
    CHECK(evs[0].words == std::vector<std::uint16_t>{0x2A, 0x2B});
    CHECK(host::to_string(evs[0]) == "read_return core=3 addr=0x0010 words=0x002A 0x002B");

    // The same as raw bytes off the wire.
    auto raw = session.execute(host::parse_console_line("00 03 02 00 10"));
    REQUIRE(raw.size() == 1);
    CHECK(raw[0].words == evs[0].words);
}

TEST_CASE("a session needs a serial tile") {
    sys::SystemConfig cfg;
    cfg.mesh.width = 1;
    cfg.mesh.height = 1;
    std::vector<services::CoreInfo> cores;
    cores.push_back({0, {0, 0}, services::NodeRole::Processor, ""});
    cfg.map = services::CoreMap(1, 1, std::move(cores));
    sys::System s(std::move(cfg));
    CHECK_THROWS_AS(host::Session{s}, ConfigError);
}

TEST_CASE("load pushes an object file over the wire and activate runs it") {
    const std::string path = "test_host_store42.obj";
    r8::save_object_file(program(kStore42Program), path);

    sys::System s = make_default_system();
    host::Session session(s);
    session.execute(host::parse_console_line("sync"));
    session.execute(host::parse_console_line("load 1 " + path));
    session.execute(host::parse_console_line("activate 1"));
    session.execute(host::parse_console_line("run 5000"));

    // The program copied 42 into shared memory and into its own word 0.
    auto shared = session.execute(host::parse_console_line("read 3 1 0x0000"));
    REQUIRE(shared.size() == 1);
    CHECK(shared[0].words == std::vector<std::uint16_t>{42});
    auto local = session.execute(host::parse_console_line("read 1 1 0x0000"));
    REQUIRE(local.size() == 1);
    CHECK(local[0].words == std::vector<std::uint16_t>{42});

    std::remove(path.c_str());
}

TEST_CASE("printf events keep per-core program order") {
    sys::SystemConfig cfg;
    cfg.images[1] = program(kTriplePrintProgram);
    cfg.images[2] = program(kTriplePrintProgram);
    sys::System s(std::move(cfg));
    host::Session session(s);
    session.execute(host::parse_console_line("sync"));
    session.execute(host::parse_console_line("activate 1"));
    session.execute(host::parse_console_line("activate 2"));
    session.execute(host::parse_console_line("run 10000"));

    for (int core : {1, 2}) {
        std::vector<std::uint16_t> words;
        for (const auto& e : session.log())
            if (e.kind == MonitorEvent::Kind::Printf && e.core == core)
                words.push_back(e.word);
        CHECK(words == std::vector<std::uint16_t>{0x11, 0x22, 0x33});
    }
}

TEST_CASE("input requests round-trip and unsolicited replies leave a warning") {
    sys::SystemConfig cfg;
    cfg.images[1] = program(kEchoPlusOneProgram);
    sys::System s(std::move(cfg));
    host::Session session(s);
    session.execute(host::parse_console_line("sync"));
    session.execute(host::parse_console_line("activate 1"));

    auto ask = session.wait_event(MonitorEvent::Kind::ScanfRequest, 1);
    REQUIRE(ask.has_value());
    CHECK(host::to_string(*ask) == "scanf core=1");

    session.execute(host::parse_console_line("scanf_reply 1 0x0041"));
    auto said = session.wait_event(MonitorEvent::Kind::Printf, 1);
    REQUIRE(said.has_value());
    CHECK(said->word == 0x0042);

    // Core 2 never asked for input; the platform flags the stray reply but
    // the frame still crosses the wire and reaches the tile.
    session.execute(host::parse_console_line("scanf_reply 2 0x0099"));
    auto warn = session.wait_event(MonitorEvent::Kind::Diagnostic, 2);
    REQUIRE(warn.has_value());
    CHECK(warn->note.find("no input request outstanding") != std::string::npos);
}

TEST_CASE("reads that cannot succeed surface diagnostics") {
    sys::System s = make_default_system();

    SUBCASE("a core the platform does not have is rejected with an error frame") {
        host::Session session(s);
        session.execute(host::parse_console_line("sync"));
        auto evs = session.execute(host::parse_console_line("read 9 1 0x0000"));
        REQUIRE(evs.size() == 1);
        CHECK(evs[0].kind == MonitorEvent::Kind::Diagnostic);
        CHECK(evs[0].note == "error frame code=2 detail=0x09");
    }

    SUBCASE("an impossibly short patience budget reports a timeout") {
        host::Session::Options opt;
        opt.response_timeout = 3;
        host::Session session(s, opt);
        session.execute(host::parse_console_line("sync"));
        auto evs = session.execute(host::parse_console_line("read 3 1 0x0000"));
        REQUIRE(evs.size() == 1);
        CHECK(evs[0].kind == MonitorEvent::Kind::Diagnostic);
        CHECK(evs[0].note == "timeout: no read reply after 3 cycles");
    }
}

TEST_CASE("scripts replay identically on identical platforms") {
    const std::string script = "# smoke script\n"
                               "sync\n"
                               "activate 1\n"
                               "expect printf 1 0xAB\n"
                               "00 03 02 00 10\n"
                               "expect read_return 3 0x0010 0x2A 0x2B\n"
                               "write 3 0x0020 7\n"
                               "read 3 1 0x0020\n"
                               "expect read_return 3 0x0020 7\n"
                               "run 100\n"
                               "quit\n"
                               "read 3 1 0x0000\n"; // never reached

    auto run_once = [&] {
        sys::SystemConfig cfg;
        cfg.images[1] = program(kPrintfProgram);
        cfg.memory_init[3] = {{0x10, 0x2A}, {0x11, 0x2B}};
        sys::System s(std::move(cfg));
        host::Session session(s);
        return host::run_script(script, session);
    };

    host::ScriptResult a = run_once();
    host::ScriptResult b = run_once();
    CHECK(a.ok());
    CHECK(a.failures == 0);
    CHECK(a.transcript == b.transcript);
    CHECK(a.transcript.find("= ok") != std::string::npos);
    CHECK(a.transcript.find("< printf core=1 word=0x00AB") != std::string::npos);
    CHECK(a.transcript.find("< read_return core=3 addr=0x0010 words=0x002A 0x002B") !=
          std::string::npos);
    // The quit command ends the run before the trailing read.
    CHECK(a.transcript.find("read 3 1 0x0000") == std::string::npos);
}

TEST_CASE("scripts record missed expectations and stop on bad commands") {
    SUBCASE("an expectation that never matches shows actual against expected") {
        sys::SystemConfig cfg;
        cfg.images[1] = program(kPrintfProgram);
        sys::System s(std::move(cfg));
        host::Session session(s);
        auto res = host::run_script("sync\n"
                                    "activate 1\n"
                                    "expect printf 1 0x9999\n"
                                    "expect scanf 1\n",
                                    session);
        CHECK_FALSE(res.ok());
        CHECK(res.failures == 2);
        // The mismatch shows what actually arrived and what was wanted.
        CHECK(res.transcript.find("< printf core=1 word=0x00AB") != std::string::npos);
        CHECK(res.transcript.find("= FAIL: wanted `expect printf 1 0x9999`") !=
              std::string::npos);
        // The scanf never comes at all.
        CHECK(res.transcript.find("= FAIL: no such event before timeout") != std::string::npos);
    }

    SUBCASE("a malformed command stops the script") {
        sys::System s = make_default_system();
        host::Session session(s);
        auto res = host::run_script("sync\n"
                                    "frobnicate 1\n"
                                    "activate 1\n",
                                    session);
        CHECK_FALSE(res.ok());
        CHECK(res.failures == 1);
        CHECK(res.transcript.find("= ERROR:") != std::string::npos);
        CHECK(res.transcript.find("> activate 1") == std::string::npos);
    }
}

TEST_CASE("matrices parse and format round-trip") {
    const std::string text = "1 2 3\n4 5 6\n";
    host::Matrix img = host::parse_matrix(text);
    REQUIRE(img.size() == 2);
    CHECK(img[0] == std::vector<std::uint16_t>{1, 2, 3});
    CHECK(img[1] == std::vector<std::uint16_t>{4, 5, 6});
    CHECK(host::format_matrix(img) == text);
    CHECK(host::parse_matrix(host::format_matrix(test_image_8x8())) == test_image_8x8());

    // Blank lines and comments are skipped.
    CHECK(host::parse_matrix("# header\n\n8 9\n7 6\n").size() == 2);

    CHECK_THROWS_AS(host::parse_matrix("1 2\n3\n"), ParseError);   // ragged
    CHECK_THROWS_AS(host::parse_matrix("1 300\n"), ParseError);    // not 8-bit
    CHECK_THROWS_AS(host::parse_matrix("1 -4\n"), ParseError);     // negative
    CHECK_THROWS_AS(host::parse_matrix("1 two\n"), ParseError);    // not a number
    CHECK_THROWS_AS(host::parse_matrix("\n# empty\n"), ParseError);
}

TEST_CASE("the host-side gradient reference behaves at edges") {
    // A constant image has no gradient anywhere.
    host::Matrix flat(4, std::vector<std::uint16_t>(5, 9));
    for (const auto& row : host::edge_reference(flat))
        for (std::uint16_t p : row)
            CHECK(p == 0);

    // A vertical step: |10-0| horizontally across the step, twice the step
    // where both neighbours differ. Worked by hand for a 1x4 row.
    host::Matrix strip = {{0, 0, 10, 10}};
    host::Matrix expect = {{0, 10, 10, 0}};
    CHECK(host::edge_reference(strip) == expect);

    // A single bright pixel in a 3x3 sea of zeros.
    host::Matrix dot = {{0, 0, 0}, {0, 200, 0}, {0, 0, 0}};
    host::Matrix want = {{0, 200, 0}, {200, 0, 200}, {0, 200, 0}};
    CHECK(host::edge_reference(dot) == want);
}

TEST_CASE("the platform computes the same gradient as the host reference") {
    sys::System s = make_default_system();
    host::Session session(s);
    host::Matrix img = test_image_8x8();
    host::Matrix got = host::edge_detect_demo(img, session);
    CHECK(got == host::edge_reference(img));
    // Both workers took rows.
    CHECK(s.processor(1).activated());
    CHECK(s.processor(2).activated());
    CHECK(s.quiescent());
}

TEST_CASE("a constant image comes back all zero") {
    sys::System s = make_default_system();
    host::Session session(s);
    host::Matrix img(5, std::vector<std::uint16_t>(7, 123));
    host::Matrix got = host::edge_detect_demo(img, session);
    for (const auto& row : got)
        for (std::uint16_t p : row)
            CHECK(p == 0);
}

TEST_CASE("a single-line image occupies a single worker") {
    sys::System s = make_default_system();
    host::Session session(s);
    host::Matrix img = {{5, 80, 5, 200, 200, 0}};
    host::Matrix got = host::edge_detect_demo(img, session);
    CHECK(got == host::edge_reference(img));
    CHECK(s.processor(1).activated());
    CHECK_FALSE(s.processor(2).activated());
    CHECK_FALSE(has_event(session.log(), MonitorEvent::Kind::Printf, 2));
}

TEST_CASE("the demo rejects images the kernel cannot hold") {
    sys::System s = make_default_system();
    host::Session session(s);
    host::Matrix wide(2, std::vector<std::uint16_t>(host::kEdgeMaxWidth + 1, 1));
    CHECK_THROWS_AS(host::edge_detect_demo(wide, session), DomainError);
    host::Matrix hot = {{1, 2}, {3, 999}};
    CHECK_THROWS_AS(host::edge_detect_demo(hot, session), DomainError);
    CHECK_THROWS_AS(host::edge_detect_demo(host::Matrix{}, session), DomainError);
}

TEST_CASE("the bundled kernel source matches the embedded one") {
    std::ifstream in(MULTINOC_SHARE_DIR "/programs/edge_kernel.asm");
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    r8::ObjectImage bundled = r8::assemble(ss.str()).image;
    r8::ObjectImage embedded = r8::assemble(host::edge_kernel_source()).image;
    CHECK(bundled.origin == embedded.origin);
    CHECK(bundled.words == embedded.words);
    // It fits well below the first row window.
    CHECK(embedded.origin == 0);
    CHECK(embedded.words.size() < 0x100);
}
