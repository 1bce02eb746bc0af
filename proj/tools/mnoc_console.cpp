// SPDX-License-Identifier: Apache-2.0
// Serial console front end: drive a configured platform interactively or
// from a script, speaking the same frames the hardware serial line carries.
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "multinoc/error.hpp"
#include "multinoc/host/console.hpp"
#include "multinoc/system/config.hpp"
#include "multinoc/system/system.hpp"

namespace {

using namespace multinoc;
namespace sys = multinoc::system;

int repl(host::Session& session) {
    std::string line;
    std::cout << "mnoc> " << std::flush;
    while (std::getline(std::cin, line)) {
        const std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') {
            std::cout << "mnoc> " << std::flush;
            continue;
        }
        try {
            host::ConsoleCommand cmd = host::parse_console_line(line);
            for (const auto& e : session.execute(cmd))
                std::cout << "< " << host::to_string(e) << "\n";
            if (cmd.kind == host::ConsoleCommand::Kind::Quit)
                return 0;
        } catch (const Error& e) {
            std::cout << "! " << e.what() << "\n";
        }
        std::cout << "mnoc> " << std::flush;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MultiNoC serial console"};
    std::string config_path;
    std::string script_path;
    std::vector<std::string> loads;
    std::uint64_t timeout = 100'000;
    app.add_option("config", config_path, "platform description (json)")->required();
    app.add_option("--script", script_path, "run this script instead of a prompt");
    app.add_option("--load", loads, "CORE=OBJECT pairs pushed over the wire before anything else");
    app.add_option("--timeout", timeout, "cycles to wait for a reply");
    CLI11_PARSE(app, argc, argv);

    try {
        sys::System s(sys::load_system_config(config_path));
        host::Session::Options opt;
        opt.response_timeout = timeout;
        host::Session session(s, opt);

        if (!loads.empty()) {
            host::ConsoleCommand sync;
            sync.kind = host::ConsoleCommand::Kind::Sync;
            session.execute(sync);
            for (const std::string& spec : loads) {
                const std::size_t eq = spec.find('=');
                if (eq == std::string::npos)
                    throw ConfigError("--load expects CORE=OBJECT, got '" + spec + "'");
                host::ConsoleCommand ld;
                ld.kind = host::ConsoleCommand::Kind::Load;
                ld.core = std::stoi(spec.substr(0, eq));
                ld.path = spec.substr(eq + 1);
                session.execute(ld);
            }
        }

        if (!script_path.empty()) {
            host::ScriptResult res = host::run_script_file(script_path, session);
            std::cout << res.transcript;
            if (!res.ok()) {
                std::cerr << "mnoc-console: " << res.failures << " failed expectation(s)\n";
                return 1;
            }
            return 0;
        }
        return repl(session);
    } catch (const Error& e) {
        std::cerr << "mnoc-console: " << e.what() << "\n";
        return 1;
    }
}
