// SPDX-License-Identifier: Apache-2.0
#include "multinoc/r8/object.hpp"

#include <fstream>
#include <sstream>

namespace multinoc::r8 {

namespace {

std::string strip(const std::string& line) {
    std::string s = line;
    auto semi = s.find(';');
    if (semi != std::string::npos) s.erase(semi);
    auto is_space = [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; };
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::uint16_t parse_hex4(const std::string& tok, int line_no) {
    if (tok.size() != 4) throw ParseError("line " + std::to_string(line_no) +
                                          ": expected a 4-digit hex word, got '" + tok + "'",
                                          line_no);
    std::uint16_t v = 0;
    for (char ch : tok) {
        int d;
        if (ch >= '0' && ch <= '9') d = ch - '0';
        else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
        else
            throw ParseError("line " + std::to_string(line_no) + ": bad hex digit '" +
                                 std::string(1, ch) + "' in '" + tok + "'",
                             line_no);
        v = static_cast<std::uint16_t>((v << 4) | d);
    }
    return v;
}

} // namespace

ObjectImage parse_object(const std::string& text) {
    ObjectImage img;
    bool origin_set = false;
    std::uint32_t cursor = 0;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = strip(raw);
        if (line.empty()) continue;
        if (line[0] == '@') {
            std::uint16_t at = parse_hex4(line.substr(1), line_no);
            if (origin_set && at < cursor)
                throw ParseError("line " + std::to_string(line_no) +
                                     ": load address moves backward",
                                 line_no);
            if (!origin_set) {
                img.origin = at;
                origin_set = true;
            } else {
                img.words.resize(at - img.origin, 0); // fill the gap
            }
            cursor = at;
            continue;
        }
        if (!origin_set) {
            img.origin = 0;
            origin_set = true;
        }
        img.words.push_back(parse_hex4(line, line_no));
        ++cursor;
        if (img.origin + img.words.size() > kLocalWords)
            throw ParseError("line " + std::to_string(line_no) +
                                 ": image exceeds the 1024-word local memory",
                             line_no);
    }
    return img;
}

ObjectImage load_object_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open object file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_object(buf.str());
}

std::string format_object(const ObjectImage& image) {
    std::ostringstream out;
    out << std::hex << std::uppercase;
    auto hex4 = [&](std::uint16_t v) {
        out.width(4);
        out.fill('0');
        out << v;
    };
    out << '@';
    hex4(image.origin);
    out << '\n';
    for (std::uint16_t w : image.words) {
        hex4(w);
        out << '\n';
    }
    return out.str();
}

void save_object_file(const ObjectImage& image, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write object file " + path);
    out << format_object(image);
}

} // namespace multinoc::r8
