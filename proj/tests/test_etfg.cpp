#include "ehc/etfg.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace ehc;
using test::plain_task;
using test::q;

namespace {

constexpr DeviceRole E = DeviceRole::Edge, H = DeviceRole::Hub, C = DeviceRole::Cloud;

SystemModel run1() { return presets::configuration("C1", presets::ChannelProfile::Run1); }

TaskGraph chain2(DeviceSet first, DeviceSet second) {
    TaskGraph g;
    g.tasks = {plain_task(1, first), plain_task(2, second)};
    g.arcs = {{TaskId{1}, TaskId{2}}};
    return g;
}

std::set<std::string> indirect_arcs(const Etfg& etfg) {
    std::set<std::string> out;
    for (const EtfgArc& a : etfg.arcs())
        if (a.indicator.indirect) out.insert(node_label(a.from_task, a.from_device) + "->" + node_label(a.to_task, a.to_device));
    return out;
}

}  // namespace

TEST_CASE("communication latency by hand") {
    SystemModel sys = run1();
    Rational d = 1000000;
    CHECK(comm_latency(d, E, H, sys) == Rational(1, 15));
    CHECK(comm_latency(d, E, C, sys) == Rational(1, 15) + Rational(1, 25));
    CHECK(comm_latency(d, E, C, sys).get_d() == doctest::Approx(0.10667).epsilon(1e-4));
    for (DeviceRole r : kAllRoles) CHECK(comm_latency(d, r, r, sys) == 0);
    CHECK(comm_latency(d, E, H, sys) != comm_latency(d, H, E, sys));
}

TEST_CASE("communication and computational energy by hand") {
    SystemModel sys = run1();
    Rational d = 1000000;
    CHECK(comm_energy(d, E, H, sys) == q("1.7"));
    CHECK(comm_energy(d, E, C, sys) == q("5.45"));
    CHECK(comm_energy(d, C, C, sys) == 0);
    CHECK(comp_energy(q("4.5"), q("0.12")) == q("0.54"));
    CHECK(comp_energy(5, 2) == 10);
    CHECK(comp_energy(0, q("7.3")) == 0);
}

TEST_CASE("indicator under the default topology") {
    SystemModel sys = run1();
    for (DeviceRole k : kAllRoles)
        for (DeviceRole l : kAllRoles) {
            Indicator ind = indicator(k, l, sys);
            bool relayed = (k == E && l == C) || (k == C && l == E);
            CHECK(ind.indirect == relayed);
            if (relayed)
                CHECK(ind.via == std::optional<DeviceRole>(H));
            else
                CHECK_FALSE(ind.via);
        }
}

TEST_CASE("route hops carry the per-hop shares") {
    SystemModel sys = run1();
    auto hops = route(2000000, E, C, sys);
    REQUIRE(hops.size() == 2);
    CHECK(hops[0].from == E);
    CHECK(hops[0].to == H);
    CHECK(hops[1].from == H);
    CHECK(hops[1].to == C);
    CHECK(hops[0].latency == Rational(2, 15));
    CHECK(hops[1].tx_energy == 5);
    CHECK(route(5, H, H, sys).empty());
}

TEST_CASE("free two-task chain expands to six nodes and nine arcs") {
    Etfg etfg = transform(chain2(DeviceSet::all(), DeviceSet::all()), run1());
    CHECK(etfg.nodes().size() == 6);
    CHECK(etfg.arcs().size() == 9);
    CHECK(indirect_arcs(etfg) == std::set<std::string>{"1e->2c", "1c->2e"});
    CHECK(etfg.composite_node(TaskId{1}).size() == 3);
    CHECK(etfg.composite_arc(0).size() == 9);
    CHECK(etfg.node_index(TaskId{2}, H) == 4);
}

TEST_CASE("edge-fixed first task expands to four nodes and three arcs") {
    Etfg etfg = transform(chain2(DeviceSet{E}, DeviceSet::all()), run1());
    CHECK(etfg.nodes().size() == 4);
    CHECK(etfg.arcs().size() == 3);
    CHECK(indirect_arcs(etfg) == std::set<std::string>{"1e->2c"});
    CHECK(etfg.node_index(TaskId{1}, H) == Etfg::npos);
    std::set<std::string> arcs;
    for (const EtfgArc& a : etfg.arcs()) arcs.insert(node_label(a.from_task, a.from_device) + "->" + node_label(a.to_task, a.to_device));
    CHECK(arcs == std::set<std::string>{"1e->2e", "1e->2h", "1e->2c"});
}

TEST_CASE("ten free tasks with eleven arcs") {
    TaskGraph g;
    for (int i = 1; i <= 10; ++i) g.tasks.push_back(plain_task(i, DeviceSet::all()));
    for (int i = 1; i < 10; ++i) g.arcs.push_back({TaskId{i}, TaskId{i + 1}});
    g.arcs.push_back({TaskId{1}, TaskId{3}});
    g.arcs.push_back({TaskId{2}, TaskId{5}});
    Etfg etfg = transform(g, run1());
    CHECK(etfg.nodes().size() == 30);
    CHECK(etfg.arcs().size() == 99);
}

TEST_CASE("arc coefficients follow the task data and direction") {
    TaskGraph g = chain2(DeviceSet::all(), DeviceSet::all());
    g.tasks[0].output_data = 3000000;
    Etfg etfg = transform(g, run1());
    for (const EtfgArc& a : etfg.arcs()) {
        CHECK(a.comm_latency == comm_latency(3000000, a.from_device, a.to_device, etfg.system()));
        CHECK(a.comm_energy == comm_energy(3000000, a.from_device, a.to_device, etfg.system()));
        CHECK(a.sender_energy() + a.receiver_energy() + a.relay_energy() == a.comm_energy);
    }
    for (const CandidateNode& n : etfg.nodes()) CHECK(n.energy == n.power * n.latency);
}

TEST_CASE("size law and coefficient properties on random graphs") {
    Rng rng(11);
    for (int round = 0; round < 150; ++round) {
        test::Instance in = test::random_instance(rng, 12, false);
        Etfg etfg = transform(in.graph, in.system);
        std::size_t nodes = 0, arcs = 0;
        for (const Task& t : in.graph.tasks) nodes += t.allowed.size();
        for (auto [i, j] : in.graph.arcs) arcs += in.graph.task(i).allowed.size() * in.graph.task(j).allowed.size();
        CHECK(etfg.nodes().size() == nodes);
        CHECK(etfg.arcs().size() == arcs);
        for (std::size_t k = 0; k < etfg.tfg_arcs().size(); ++k) {
            auto [i, j] = etfg.tfg_arcs()[k];
            CHECK(etfg.composite_arc(k).size() == in.graph.task(i).allowed.size() * in.graph.task(j).allowed.size());
        }
        CHECK(etfg_to_json(etfg) == etfg_to_json(transform(in.graph, in.system)));
        CHECK(etfg_to_dot(etfg) == etfg_to_dot(transform(in.graph, in.system)));
    }
}

TEST_CASE("linearity and zero data") {
    Rng rng(3);
    for (auto profile : {presets::ChannelProfile::Run1, presets::ChannelProfile::Run2}) {
        SystemModel sys = presets::configuration("C2", profile);
        for (int round = 0; round < 50; ++round) {
            Rational d(static_cast<long>(rng.uniform_int(1, 100000000)));
            for (DeviceRole k : kAllRoles)
                for (DeviceRole l : kAllRoles) {
                    CHECK(comm_latency(2 * d, k, l, sys) == 2 * comm_latency(d, k, l, sys));
                    CHECK(comm_energy(2 * d, k, l, sys) == 2 * comm_energy(d, k, l, sys));
                    CHECK(comm_latency(0, k, l, sys) == 0);
                    CHECK(comm_energy(0, k, l, sys) == 0);
                }
        }
    }
}

TEST_CASE("dot export dashes the relayed arcs") {
    Etfg etfg = transform(chain2(DeviceSet::all(), DeviceSet::all()), run1());
    std::string dot = etfg_to_dot(etfg);
    std::size_t count = 0;
    for (std::size_t p = dot.find("style=dashed,color=orange"); p != std::string::npos;
         p = dot.find("style=dashed,color=orange", p + 1))
        ++count;
    CHECK(count == 2);
}

TEST_CASE("transform rejects invalid graphs and missing routes") {
    TaskGraph g = chain2(DeviceSet::all(), DeviceSet::all());
    g.arcs.push_back({TaskId{2}, TaskId{1}});
    CHECK_THROWS_AS(transform(g, run1()), ValidationError);

    SystemModel sys = run1();
    sys.clear_relays();
    CHECK_THROWS_AS(transform(chain2(DeviceSet{E}, DeviceSet{C}), sys), Error);
    CHECK_NOTHROW(transform(chain2(DeviceSet{E}, DeviceSet{H}), sys));
}
