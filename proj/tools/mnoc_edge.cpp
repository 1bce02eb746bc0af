// SPDX-License-Identifier: Apache-2.0
// Edge-detection front end: plain-text image in, gradient image out,
// computed by the processor tiles of a simulated platform.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "multinoc/error.hpp"
#include "multinoc/host/console.hpp"
#include "multinoc/host/edge_demo.hpp"
#include "multinoc/system/config.hpp"
#include "multinoc/system/system.hpp"

int main(int argc, char** argv) {
    CLI::App app{"MultiNoC edge-detection demo"};
    std::string config_path;
    std::string input_path;
    std::string output_path;
    bool reference = false;
    app.add_option("--config", config_path, "platform description (default: built-in 2x2)");
    app.add_option("--input", input_path, "image file (default: stdin)");
    app.add_option("--output", output_path, "result file (default: stdout)");
    app.add_flag("--reference", reference, "compute host-side only, no simulation");
    CLI11_PARSE(app, argc, argv);

    using namespace multinoc;
    namespace sys = multinoc::system;

    try {
        std::string text;
        if (input_path.empty()) {
            std::stringstream ss;
            ss << std::cin.rdbuf();
            text = ss.str();
        } else {
            std::ifstream in(input_path);
            if (!in) {
                std::cerr << "mnoc-edge: cannot open " << input_path << "\n";
                return 1;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        host::Matrix img = host::parse_matrix(text);

        host::Matrix out;
        if (reference) {
            out = host::edge_reference(img);
        } else {
            sys::SystemConfig cfg;
            if (!config_path.empty())
                cfg = sys::load_system_config(config_path);
            sys::System s(std::move(cfg));
            host::Session session(s);
            out = host::edge_detect_demo(img, session);
        }

        if (output_path.empty()) {
            std::cout << host::format_matrix(out);
        } else {
            std::ofstream o(output_path);
            o << host::format_matrix(out);
        }
        return 0;
    } catch (const multinoc::Error& e) {
        std::cerr << "mnoc-edge: " << e.what() << "\n";
        return 1;
    }
}
