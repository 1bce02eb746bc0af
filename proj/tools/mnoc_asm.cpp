// SPDX-License-Identifier: Apache-2.0
// Assembler front end: R8 assembly text in, loadable object text out.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "multinoc/error.hpp"
#include "multinoc/r8/assembler.hpp"
#include "multinoc/r8/object.hpp"

int main(int argc, char** argv) {
    CLI::App app{"R8 assembler"};
    std::string input;
    std::string output;
    bool listing = false;
    app.add_option("input", input, "assembly source file")->required();
    app.add_option("-o,--output", output, "object file to write (default: stdout)");
    app.add_flag("-l,--listing", listing, "print the address/word listing");
    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(input);
        if (!in) {
            std::cerr << "mnoc-asm: cannot open " << input << "\n";
            return 1;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        multinoc::r8::Assembly out = multinoc::r8::assemble(ss.str());
        if (listing)
            std::cout << out.listing;
        if (!output.empty()) {
            multinoc::r8::save_object_file(out.image, output);
        } else if (!listing) {
            std::cout << multinoc::r8::format_object(out.image);
        }
        return 0;
    } catch (const multinoc::Error& e) {
        std::cerr << "mnoc-asm: " << e.what() << "\n";
        return 1;
    }
}
