#include "catch_amalgamated.hpp"

#include "circuits.hpp"
#include "tractionpf/errors.hpp"
#include "tractionpf/scenarios.hpp"
#include "tractionpf/search.hpp"

#include <cmath>
#include <map>
#include <set>

using namespace tpf;
using Catch::Approx;

namespace {

std::map<std::string, double> wire_positions(const CircuitSpec& spec, double resistivity) {
    // walk the wire chain from w000, accumulating resistance / resistivity
    std::map<std::string, double> pos;
    pos[spec.nodes.front()] = 0.0;
    for (const auto& r : spec.resistors) {
        if (r.a[0] == 'w' && r.b[0] == 'w') pos[r.b] = pos.at(r.a) + r.ohms / resistivity;
    }
    return pos;
}

}  // namespace

TEST_CASE("single-load circuit", "[scenarios]") {
    const auto spec = single_load_circuit(600.0, 0.1, 9e5);
    CHECK(spec.nodes.size() == 2);
    CHECK(spec.loads.at(0).watts == 9e5);
    const auto sys = assemble(spec);
    CHECK(search_efficient(sys).alpha_hat == 1.0);

    const auto idle = assemble(single_load_circuit(600.0, 0.1, 0.0));
    const auto r = search_efficient(idle);
    CHECK(r.fully_supplied);
    CHECK(r.phi_hat(0) == Approx(600.0));

    const auto hard = assemble(single_load_circuit(600.0, 0.1, 1e6));
    CHECK(search_efficient(hard).alpha_hat == Approx(testing::single_load_alpha0(600.0, 0.1, 1e6)).margin(1e-4));

    CHECK_THROWS_AS(single_load_circuit(0.0, 0.1, 1.0), ValidationError);
    CHECK_THROWS_AS(single_load_circuit(600.0, -0.1, 1.0), ValidationError);
}

TEST_CASE("toy case 1 structure", "[scenarios]") {
    const auto s = toy_case_1();
    const auto spec = s.to_circuit();
    CHECK(spec.loads.size() == 4);
    CHECK(spec.sources.size() == 1);
    CHECK(s.feeds.size() == 1);
    std::multiset<double> demands;
    for (const auto& l : spec.loads) demands.insert(l.watts);
    CHECK(demands == std::multiset<double>{260e3, 20e3, 30e3, -5e3});
    for (const auto& r : spec.resistors) {
        CHECK(r.ohms >= 0.023);
        CHECK(r.ohms <= 0.23);
    }
    CHECK(spec.sources[0].volts == 600.0);
}

TEST_CASE("toy case 2 structure", "[scenarios]") {
    const auto s = toy_case_2();
    const auto spec = s.to_circuit();
    CHECK(spec.loads.size() == 10);
    CHECK(spec.sources.size() == 2);
    CHECK(s.feeds.size() == 2);
    for (const auto& l : spec.loads) CHECK(l.watts == 250e3);
    for (const auto& r : spec.resistors) {
        CHECK(r.ohms >= 0.023);
        CHECK(r.ohms <= 0.23);
    }
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("toy case regression values", "[scenarios][regression]") {
    // fold points of the reconstructions, from an independent nodal solver
    const double toy1 = 0.49675207;
    const double toy2 = 0.59017395;
    const auto r1 = search_efficient(assemble(toy_case_1().to_circuit()));
    const auto r2 = search_efficient(assemble(toy_case_2().to_circuit()));
    CHECK(r1.alpha_hat <= toy1 + 1e-8);
    CHECK(r1.alpha_hat >= toy1 - 1e-4);
    CHECK(r2.alpha_hat <= toy2 + 1e-8);
    CHECK(r2.alpha_hat >= toy2 - 1e-4);
}

TEST_CASE("wire resistance is linear in distance", "[scenarios][property]") {
    LadderScenario s;
    s.wire_length = 1000.0;
    s.pole_spacing = 0.0;
    s.resistivity = 2e-4;
    s.feeds = {{0.0, 50.0}};
    s.vehicles = {{130.0, 1e4}, {555.5, 2e4}, {1000.0, 3e4}};
    const auto spec = s.to_circuit();
    REQUIRE(spec.nodes.size() == 5);
    const auto pos = wire_positions(spec, s.resistivity);
    CHECK(pos.at("w001") == Approx(130.0));
    CHECK(pos.at("w002") == Approx(555.5));
    CHECK(pos.at("w003") == Approx(1000.0));
    CHECK(spec.resistors.back().ohms == Approx(50.0 * 2e-4));

    s.pole_spacing = 250.0;
    const auto poles = s.to_circuit();
    // 0, 130, 250, 500, 555.5, 750, 1000
    CHECK(poles.nodes.size() == 8);
}

TEST_CASE("ladder validation", "[scenarios][errors]") {
    auto s = toy_case_1();
    s.feeds.clear();
    CHECK_THROWS_AS(s.to_circuit(), ValidationError);

    s = toy_case_1();
    s.resistivity = 0.0;
    CHECK_THROWS_AS(s.to_circuit(), ValidationError);

    s = toy_case_1();
    std::swap(s.vehicles[0], s.vehicles[1]);
    CHECK_THROWS_AS(s.to_circuit(), ValidationError);

    s = toy_case_1();
    s.vehicles.push_back({1e5, 1.0});
    CHECK_THROWS_AS(s.to_circuit(), ValidationError);

    s = toy_case_1();
    s.vehicles[0].position = -1.0;
    CHECK_THROWS_AS(s.to_circuit(), ValidationError);
}

TEST_CASE("stop-and-go cycle shape", "[scenarios]") {
    const StopAndGoProfile p;
    const auto cycle = stop_and_go_cycle(200.0, p);
    double last = -1.0;
    bool braking = false;
    bool accelerating = false;
    for (double t = 0.0; t < 120.0; t += 0.25) {
        const auto s = cycle(t);
        CHECK(s.position > last);
        CHECK(s.speed >= p.low_speed - 1e-12);
        CHECK(s.speed <= p.high_speed + 1e-12);
        braking = braking || s.power < 0.0;
        accelerating = accelerating || s.power == p.accel_power;
        last = s.position;
    }
    CHECK(braking);
    CHECK(accelerating);
    // one period covers one intersection spacing exactly
    const double t_ramp = (p.high_speed - p.low_speed) / p.acceleration;
    const double d_ramp = (p.high_speed * p.high_speed - p.low_speed * p.low_speed) / (2 * p.acceleration);
    const double period = 2 * t_ramp + (200.0 - 2 * d_ramp) / p.high_speed;
    CHECK(cycle(period).position == Approx(200.0));
    CHECK(cycle(3 * period).position == Approx(600.0));

    CHECK_THROWS_AS(stop_and_go_cycle(20.0, p), ValidationError);
    CHECK_THROWS_AS(stop_and_go_cycle(-1.0, p), ValidationError);
}

TEST_CASE("vehicle at the substation is fully supplied", "[scenarios]") {
    RouteOptions route;
    route.route_length = 400.0;
    route.intersection_spacing = 200.0;
    const auto steps = straight_route_timeline(route, constant_cycle(10.0, 2e5));
    REQUIRE_FALSE(steps.empty());
    CHECK(steps.front().position == 0.0);
    CHECK(steps.front().alpha_hat == 1.0);
}

TEST_CASE("constant demand timeline decreases with distance", "[scenarios][property]") {
    RouteOptions route;
    route.route_length = 8000.0;
    const auto steps = straight_route_timeline(route, constant_cycle(20.0, 6e5));
    REQUIRE(steps.size() > 100);
    for (std::size_t k = 1; k < steps.size(); ++k) {
        CHECK(steps[k].alpha_hat <= steps[k - 1].alpha_hat);
        CHECK(steps[k].deficit_energy >= 0.0);
    }
    CHECK(steps.front().alpha_hat == 1.0);
    CHECK(steps.back().alpha_hat < 1.0);
    for (const auto& s : steps) {
        CHECK(s.received == Approx(s.alpha_hat * s.demanded));
        CHECK(s.deficit_energy == Approx((1.0 - s.alpha_hat) * s.demanded * route.dt).margin(1e-9));
    }
}

TEST_CASE("stop-and-go timeline", "[scenarios]") {
    RouteOptions route;
    route.route_length = 2000.0;
    const auto steps = straight_route_timeline(route, stop_and_go_cycle(route.intersection_spacing));
    REQUIRE_FALSE(steps.empty());
    CHECK(steps.back().position <= route.route_length);
    bool regen = false;
    for (const auto& s : steps) {
        CHECK(s.alpha_hat >= 0.0);
        CHECK(s.alpha_hat <= 1.0);
        regen = regen || s.demanded < 0.0;
    }
    CHECK(regen);
}

TEST_CASE("route options are validated", "[scenarios][errors]") {
    RouteOptions route;
    route.intersection_spacing = 300.0;
    CHECK_THROWS_AS(straight_route_timeline(route, constant_cycle(10.0, 1e5)), ValidationError);
    route = RouteOptions{};
    route.dt = 0.0;
    CHECK_THROWS_AS(straight_route_timeline(route, constant_cycle(10.0, 1e5)), ValidationError);
    route = RouteOptions{};
    route.substation_position = 9000.0;
    CHECK_THROWS_AS(straight_route_timeline(route, constant_cycle(10.0, 1e5)), ValidationError);
}
