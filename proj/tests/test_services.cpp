// SPDX-License-Identifier: Apache-2.0
//
// Service message wire format tests. Expected byte sequences are written
// out by hand from the field layout, independent of the encoder.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "multinoc/services/core_map.hpp"
#include "multinoc/services/service.hpp"

using namespace multinoc;
using namespace multinoc::services;
using noc::Flit;
using noc::NetAddress;

TEST_CASE("each service encodes to its documented byte layout") {
    ServiceMessage m;

    m.kind = ServiceKind::ReadMem;
    m.source = 2;
    m.address = 0x0123;
    m.count = 5;
    CHECK(encode_service(m) == std::vector<Flit>{0x01, 0x02, 0x01, 0x23, 0x05});

    m = {};
    m.kind = ServiceKind::ReadReturn;
    m.address = 0x0040;
    m.words = {0x0001};
    CHECK(encode_service(m) == std::vector<Flit>{0x02, 0x00, 0x40, 0x01, 0x00, 0x01});

    m = {};
    m.kind = ServiceKind::WriteMem;
    m.address = 0x0800;
    m.words = {0xDEAD, 0xBEEF};
    CHECK(encode_service(m) ==
          std::vector<Flit>{0x03, 0x08, 0x00, 0x02, 0xDE, 0xAD, 0xBE, 0xEF});

    m = {};
    m.kind = ServiceKind::Activate;
    CHECK(encode_service(m) == std::vector<Flit>{0x04});

    m = {};
    m.kind = ServiceKind::Printf;
    m.source = 1;
    m.data = 0x00AB;
    CHECK(encode_service(m) == std::vector<Flit>{0x05, 0x01, 0x00, 0xAB});

    m = {};
    m.kind = ServiceKind::Scanf;
    m.source = 3;
    CHECK(encode_service(m) == std::vector<Flit>{0x06, 0x03});

    m = {};
    m.kind = ServiceKind::ScanfReturn;
    m.data = 0xCAFE;
    CHECK(encode_service(m) == std::vector<Flit>{0x07, 0xCA, 0xFE});

    m = {};
    m.kind = ServiceKind::Notify;
    m.source = 1;
    CHECK(encode_service(m) == std::vector<Flit>{0x08, 0x01});
}

TEST_CASE("a printf to the serial bridge forms the reference packet") {
    ServiceMessage m;
    m.kind = ServiceKind::Printf;
    m.source = 1;
    m.data = 0x00AB;
    auto pkt = make_service_packet(NetAddress{0, 0}, m);
    CHECK(pkt == std::vector<Flit>{0x00, 0x04, 0x05, 0x01, 0x00, 0xAB});
}

TEST_CASE("encode and decode are inverse for every message shape") {
    std::mt19937_64 rng(777);
    auto rnd_word = [&] { return static_cast<std::uint16_t>(rng() & 0xFFFF); };
    auto rnd_byte = [&] { return static_cast<std::uint8_t>(rng() & 0xFF); };

    for (int iter = 0; iter < 20000; ++iter) {
        ServiceMessage m;
        switch (rng() % 8) {
        case 0:
            m.kind = ServiceKind::ReadMem;
            m.source = rnd_byte();
            m.address = rnd_word();
            m.count = static_cast<std::uint8_t>(1 + rng() % kMaxServiceWords);
            break;
        case 1:
            m.kind = ServiceKind::ReadReturn;
            m.address = rnd_word();
            m.words.resize(1 + rng() % kMaxServiceWords);
            for (auto& w : m.words) w = rnd_word();
            m.count = static_cast<std::uint8_t>(m.words.size());
            break;
        case 2:
            m.kind = ServiceKind::WriteMem;
            m.address = rnd_word();
            m.words.resize(1 + rng() % kMaxServiceWords);
            for (auto& w : m.words) w = rnd_word();
            m.count = static_cast<std::uint8_t>(m.words.size());
            break;
        case 3: m.kind = ServiceKind::Activate; break;
        case 4:
            m.kind = ServiceKind::Printf;
            m.source = rnd_byte();
            m.data = rnd_word();
            break;
        case 5:
            m.kind = ServiceKind::Scanf;
            m.source = rnd_byte();
            break;
        case 6:
            m.kind = ServiceKind::ScanfReturn;
            m.data = rnd_word();
            break;
        case 7:
            m.kind = ServiceKind::Notify;
            m.source = rnd_byte();
            break;
        }
        auto body = encode_service(m);
        CHECK(body.size() <= 255); // always fits the single-byte size field
        ServiceMessage back = decode_service(body);
        CHECK(back == m);

        auto pkt = make_service_packet(NetAddress{1, 1}, m);
        REQUIRE(pkt.size() == body.size() + 2);
        CHECK(pkt[0] == NetAddress{1, 1}.packed());
        CHECK(pkt[1] == body.size());
    }
}

TEST_CASE("malformed service bodies are rejected") {
    ServiceMessage wait;
    wait.kind = ServiceKind::Wait;
    CHECK_THROWS_AS(encode_service(wait), DomainError);

    ServiceMessage over;
    over.kind = ServiceKind::WriteMem;
    over.address = 0;
    over.words.resize(126, 1);
    CHECK_THROWS_AS(encode_service(over), DomainError);
    over.words.clear();
    CHECK_THROWS_AS(encode_service(over), DomainError);

    ServiceMessage rd;
    rd.kind = ServiceKind::ReadMem;
    rd.count = 0;
    CHECK_THROWS_AS(encode_service(rd), DomainError);
    rd.count = 126;
    CHECK_THROWS_AS(encode_service(rd), DomainError);

    CHECK_THROWS_AS(decode_service({}), ParseError);
    CHECK_THROWS_AS(decode_service({0x00}), ParseError);        // no such kind
    CHECK_THROWS_AS(decode_service({0x09}), ParseError);        // reserved
    CHECK_THROWS_AS(decode_service({0x0A}), ParseError);        // out of range
    CHECK_THROWS_AS(decode_service({0x05, 0x01, 0x00}), ParseError); // short printf
    CHECK_THROWS_AS(decode_service({0x01, 0x00, 0x00, 0x00, 0x00}), ParseError); // count 0
    CHECK_THROWS_AS(decode_service({0x03, 0x00, 0x00, 0x02, 0xAA, 0xBB}), ParseError); // short
    CHECK_THROWS_AS(decode_service({0x03, 0x00, 0x00}), ParseError);
    CHECK_THROWS_AS(decode_service({0x04, 0x00}), ParseError); // oversized activate
}

TEST_CASE("the reference platform map places four cores on a 2x2 mesh") {
    CoreMap map = CoreMap::standard();
    CHECK(map.width() == 2);
    CHECK(map.height() == 2);
    CHECK(map.count() == 4);
    CHECK(map.role_of(0) == NodeRole::Serial);
    CHECK(map.address_of(0) == NetAddress{0, 0});
    CHECK(map.role_of(1) == NodeRole::Processor);
    CHECK(map.address_of(1) == NetAddress{1, 0});
    CHECK(map.role_of(2) == NodeRole::Processor);
    CHECK(map.address_of(2) == NetAddress{0, 1});
    CHECK(map.role_of(3) == NodeRole::Memory);
    CHECK(map.address_of(3) == NetAddress{1, 1});

    CHECK(map.serial_core() == 0);
    CHECK(map.processors() == std::vector<int>{1, 2});
    CHECK(map.memories() == std::vector<int>{3});
    CHECK(map.core_at(NetAddress{1, 0}) == 1);
    CHECK_FALSE(map.core_at(NetAddress{5, 5}).has_value());
    CHECK_THROWS_AS(map.info(4), DomainError);
    CHECK_THROWS_AS(map.info(-1), DomainError);
}

TEST_CASE("core map validation rejects broken layouts") {
    using V = std::vector<CoreInfo>;
    CHECK_THROWS_AS(CoreMap(0, 2, V{{0, {0, 0}, NodeRole::Serial, ""}}), ConfigError);
    CHECK_THROWS_AS(CoreMap(2, 2, V{}), ConfigError);
    // Two serial bridges.
    CHECK_THROWS_AS(CoreMap(2, 2,
                            V{{0, {0, 0}, NodeRole::Serial, ""},
                              {1, {1, 0}, NodeRole::Serial, ""}}),
                    ConfigError);
    // Shared position.
    CHECK_THROWS_AS(CoreMap(2, 2,
                            V{{0, {0, 0}, NodeRole::Serial, ""},
                              {1, {0, 0}, NodeRole::Processor, ""}}),
                    ConfigError);
    // Outside the mesh.
    CHECK_THROWS_AS(CoreMap(2, 2, V{{0, {2, 0}, NodeRole::Processor, ""}}), ConfigError);
    // Sparse ids.
    CHECK_THROWS_AS(CoreMap(2, 2, V{{1, {0, 0}, NodeRole::Processor, ""}}), ConfigError);
    // A serial-less platform is allowed (autonomous operation).
    CHECK_NOTHROW(CoreMap(2, 2, V{{0, {0, 0}, NodeRole::Processor, ""}}));
}
