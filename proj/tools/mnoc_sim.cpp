// SPDX-License-Identifier: Apache-2.0
// Simulation front end: run a configured platform, or benchmark the fabric
// with synthetic traffic and report latency and throughput tables.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "multinoc/error.hpp"
#include "multinoc/system/config.hpp"
#include "multinoc/system/metrics.hpp"
#include "multinoc/system/system.hpp"
#include "multinoc/system/traffic.hpp"

namespace {

using namespace multinoc;
namespace sys = multinoc::system;

int bench_peak() {
    // Five disjoint connections keep every port of the centre router of a
    // 3x3 mesh busy: one flit accepted per port every two cycles.
    noc::MeshConfig mc{3, 3, 2, 7, true, false};
    noc::Mesh mesh(mc);
    const int stream = 3000;
    auto feed = [&](int sx, int sy, int dx, int dy) {
        mesh.stub(mesh.node_index({static_cast<std::uint8_t>(sx),
                                   static_cast<std::uint8_t>(sy)}))
            .schedule_packet(0, sys::traffic_packet(
                                    noc::NetAddress{static_cast<std::uint8_t>(dx),
                                                    static_cast<std::uint8_t>(dy)},
                                    stream));
    };
    feed(0, 1, 1, 1);
    feed(1, 1, 2, 1);
    feed(2, 1, 0, 1);
    feed(1, 0, 1, 2);
    feed(1, 2, 1, 0);
    for (int i = 0; i < 1300; ++i)
        mesh.cycle();
    auto rep = sys::throughput_report(mesh, 200, 1200, 8, 50'000'000);
    std::cout << rep.table();
    const auto& centre = rep.router(1, 1);
    std::printf("centre router: %llu flits in %llu cycles = %.3f flits/cycle = %.3f Gbit/s "
                "(utilization %.3f)\n",
                static_cast<unsigned long long>(centre.flits),
                static_cast<unsigned long long>(rep.end - rep.begin), centre.flits_per_cycle,
                centre.bits_per_s / 1e9, centre.utilization);
    return centre.utilization == 1.0 ? 0 : 1;
}

int bench_traffic(int width, int height, double rate, std::uint64_t horizon,
                  std::uint64_t seed, bool pairwise) {
    noc::MeshConfig mc{width, height, 2, 7, false, true};
    sys::TrafficConfig tc;
    tc.pattern = pairwise ? sys::TrafficPattern::PairWise : sys::TrafficPattern::UniformRandom;
    tc.rate = rate;
    tc.seed = seed;
    tc.horizon = horizon;
    auto schedule = sys::traffic_generate(mc, tc);
    noc::Mesh mesh(mc);
    auto stats = sys::run_traffic(mesh, schedule, horizon * 100);
    std::printf("scheduled=%zu delivered=%zu cycles=%llu drained=%s audit=%s\n",
                stats.scheduled, stats.delivered,
                static_cast<unsigned long long>(stats.cycles),
                stats.drained ? "yes" : "no",
                mesh.audit_errors().empty() ? "clean" : "VIOLATED");
    auto rep = sys::latency_report(mesh.packets(), mc.routing_cycles);
    std::cout << rep.table();
    return stats.drained && mesh.audit_errors().empty() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MultiNoC platform simulator"};
    std::string config_path;
    std::string trace_path;
    std::string csv_path;
    std::uint64_t cycles = 0;
    bool bench = false;
    bool traffic = false;
    int width = 4, height = 4;
    double rate = 0.1;
    std::uint64_t horizon = 10'000;
    std::uint64_t seed = 1;
    bool pairwise = false;
    app.add_option("config", config_path, "platform description (json)");
    app.add_option("--cycles", cycles, "run budget (default: the config's max_cycles)");
    app.add_option("--trace", trace_path, "write the event trace to this file");
    app.add_option("--csv", csv_path, "write the packet table to this file");
    app.add_flag("--bench-peak", bench, "measure the saturated-centre router peak");
    app.add_flag("--bench-traffic", traffic, "run synthetic traffic on a bare mesh");
    app.add_option("--width", width, "mesh width for --bench-traffic");
    app.add_option("--height", height, "mesh height for --bench-traffic");
    app.add_option("--rate", rate, "offered load in flits/cycle/node (0,1]");
    app.add_option("--horizon", horizon, "injection horizon in cycles");
    app.add_option("--seed", seed, "traffic seed");
    app.add_flag("--pairwise", pairwise, "pair-wise pattern instead of uniform random");
    CLI11_PARSE(app, argc, argv);

    try {
        if (bench)
            return bench_peak();
        if (traffic)
            return bench_traffic(width, height, rate, horizon, seed, pairwise);
        if (config_path.empty()) {
            std::cerr << "mnoc-sim: need a config file (or --bench-peak/--bench-traffic)\n";
            return 1;
        }
        sys::System s(sys::load_system_config(config_path));
        sys::RunResult r = s.run(cycles);
        std::printf("cycles=%llu quiescent=%s deadlock=%s\n",
                    static_cast<unsigned long long>(r.cycles), r.quiescent ? "yes" : "no",
                    r.deadlock ? "yes" : "no");
        if (!r.diagnostic.empty())
            std::cout << r.diagnostic << "\n";
        const sys::SimTrace& t = s.finalize_trace();
        auto rep = sys::latency_report(t.packets, s.config().mesh.routing_cycles);
        std::cout << rep.table();
        if (!trace_path.empty()) {
            std::ofstream out(trace_path);
            out << t.text();
            std::printf("trace=%s hash=%016llx\n", trace_path.c_str(),
                        static_cast<unsigned long long>(t.hash()));
        }
        if (!csv_path.empty()) {
            std::ofstream out(csv_path);
            out << t.packets_csv();
        }
        return r.deadlock ? 2 : 0;
    } catch (const Error& e) {
        std::cerr << "mnoc-sim: " << e.what() << "\n";
        return 1;
    }
}
