#include "tractionpf/scenarios.hpp"

#include "tractionpf/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace tpf {

namespace {

// positions closer than this share a wire node
constexpr double kSamePosition = 1e-6;

[[noreturn]] void invalid(const std::string& message) {
    throw ValidationError(ValidationCode::invalid_value, message);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

CircuitSpec single_load_circuit(double volts, double ohms, double watts) {
    if (!positive_finite(volts)) invalid(fmt::format("source voltage must be positive, got {}", volts));
    if (!positive_finite(ohms)) invalid(fmt::format("resistance must be positive, got {}", ohms));
    CircuitSpec spec;
    spec.nodes = {"source", "load"};
    spec.resistors = {{"source", "load", ohms}};
    spec.sources = {{"source", volts}};
    spec.loads = {{"load", watts}};
    return spec;
}

void LadderScenario::validate() const {
    if (!positive_finite(substation_voltage)) invalid("substation voltage must be positive");
    if (!positive_finite(resistivity)) invalid("wire resistivity must be positive");
    if (!std::isfinite(wire_length) || wire_length < 0.0) invalid("wire length must be non-negative");
    if (!std::isfinite(pole_spacing) || pole_spacing < 0.0) invalid("pole spacing must be non-negative");
    if (feeds.empty()) invalid("scenario needs at least one feed point");

    auto on_wire = [&](double x) { return std::isfinite(x) && x >= 0.0 && x <= wire_length + kSamePosition; };
    for (std::size_t k = 0; k < feeds.size(); ++k) {
        if (!on_wire(feeds[k].position)) invalid(fmt::format("feeds[{}]: position outside the wire", k));
        if (!positive_finite(feeds[k].feeder_length)) invalid(fmt::format("feeds[{}]: feeder length must be positive", k));
    }
    for (std::size_t k = 0; k < vehicles.size(); ++k) {
        if (!on_wire(vehicles[k].position)) invalid(fmt::format("vehicles[{}]: position outside the wire", k));
        if (!std::isfinite(vehicles[k].demand)) invalid(fmt::format("vehicles[{}]: demand must be finite", k));
        if (k > 0 && !(vehicles[k].position > vehicles[k - 1].position + kSamePosition)) {
            invalid(fmt::format("vehicles[{}]: positions must be strictly increasing", k));
        }
    }
}

CircuitSpec LadderScenario::to_circuit() const {
    validate();

    std::vector<double> positions;
    if (pole_spacing > 0.0) {
        const auto poles = static_cast<long>(std::floor(wire_length / pole_spacing + 1e-9));
        for (long k = 0; k <= poles; ++k) positions.push_back(static_cast<double>(k) * pole_spacing);
    }
    for (const auto& f : feeds) positions.push_back(f.position);
    for (const auto& v : vehicles) positions.push_back(v.position);
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end(),
                                [](double a, double b) { return std::abs(a - b) <= kSamePosition; }),
                    positions.end());

    const int width = std::max<int>(3, static_cast<int>(std::to_string(positions.size()).size()));
    auto wire_node = [&](std::size_t k) { return fmt::format("w{:0{}}", k, width); };
    auto node_at = [&](double x) {
        const auto it = std::lower_bound(positions.begin(), positions.end(), x - kSamePosition);
        return wire_node(static_cast<std::size_t>(it - positions.begin()));
    };

    CircuitSpec spec;
    for (std::size_t k = 0; k < positions.size(); ++k) {
        spec.nodes.push_back(wire_node(k));
        if (k > 0) {
            spec.resistors.push_back({wire_node(k - 1), wire_node(k), resistivity * (positions[k] - positions[k - 1])});
        }
    }
    for (std::size_t k = 0; k < feeds.size(); ++k) {
        const auto sub = fmt::format("sub{}", k);
        spec.nodes.push_back(sub);
        spec.resistors.push_back({sub, node_at(feeds[k].position), resistivity * feeds[k].feeder_length});
        spec.sources.push_back({sub, substation_voltage});
    }
    for (const auto& v : vehicles) {
        spec.loads.push_back({node_at(v.position), v.demand});
    }
    return spec;
}

LadderScenario toy_case_1() {
    LadderScenario s;
    s.substation_voltage = 600.0;
    s.resistivity = kToyResistivity;
    s.wire_length = 9 * kToySpan;
    s.pole_spacing = kToySpan;
    s.feeds = {{0.0, kToySpan}};
    s.vehicles = {
        {3 * kToySpan, 20e3},
        {5 * kToySpan, -5e3},
        {7 * kToySpan, 30e3},
        {9 * kToySpan, 260e3},
    };
    return s;
}

LadderScenario toy_case_2() {
    LadderScenario s;
    s.substation_voltage = 600.0;
    s.resistivity = kToyResistivity;
    s.wire_length = 11 * kToySpan;
    s.pole_spacing = kToySpan;
    s.feeds = {{2 * kToySpan, kToySpan}, {9 * kToySpan, kToySpan}};
    for (int k = 0; k <= 11; ++k) {
        if (k == 2 || k == 9) continue;
        s.vehicles.push_back({k * kToySpan, 250e3});
    }
    return s;
}

DrivingCycle stop_and_go_cycle(double intersection_spacing, const StopAndGoProfile& p) {
    if (!positive_finite(intersection_spacing)) invalid("intersection spacing must be positive");
    if (!positive_finite(p.acceleration)) invalid("acceleration must be positive");
    if (!(p.low_speed >= 0.0 && p.high_speed > p.low_speed)) invalid("need 0 <= low_speed < high_speed");

    const double t_ramp = (p.high_speed - p.low_speed) / p.acceleration;
    const double d_ramp = (p.high_speed * p.high_speed - p.low_speed * p.low_speed) / (2.0 * p.acceleration);
    const double d_cruise = intersection_spacing - 2.0 * d_ramp;
    if (d_cruise < 0.0) invalid("intersection spacing too short for the speed profile");
    const double t_cruise = d_cruise / p.high_speed;
    const double period = 2.0 * t_ramp + t_cruise;

    return [=](double t) {
        const double block = std::floor(t / period);
        double tau = t - block * period;
        DriveState s;
        const double base = block * intersection_spacing;
        if (tau < t_ramp) {
            s.speed = p.low_speed + p.acceleration * tau;
            s.position = base + p.low_speed * tau + 0.5 * p.acceleration * tau * tau;
            s.power = p.accel_power;
        } else if (tau < t_ramp + t_cruise) {
            tau -= t_ramp;
            s.speed = p.high_speed;
            s.position = base + d_ramp + p.high_speed * tau;
            s.power = p.cruise_power;
        } else {
            tau -= t_ramp + t_cruise;
            s.speed = p.high_speed - p.acceleration * tau;
            s.position = base + d_ramp + d_cruise + p.high_speed * tau - 0.5 * p.acceleration * tau * tau;
            s.power = p.brake_power;
        }
        return s;
    };
}

DrivingCycle constant_cycle(double speed, double power) {
    if (!positive_finite(speed)) invalid("speed must be positive");
    return [=](double t) { return DriveState{speed * t, speed, power}; };
}

void RouteOptions::validate() const {
    if (!positive_finite(route_length)) invalid("route length must be positive");
    if (!positive_finite(intersection_spacing)) invalid("intersection spacing must be positive");
    const double blocks = route_length / intersection_spacing;
    if (std::abs(blocks - std::round(blocks)) > 1e-9 * std::max(1.0, blocks)) {
        invalid(fmt::format("intersection spacing {} does not divide route length {}", intersection_spacing,
                            route_length));
    }
    if (!(substation_position >= 0.0 && substation_position <= route_length)) {
        invalid("substation must lie on the route");
    }
    if (!positive_finite(feeder_length)) invalid("feeder length must be positive");
    if (!positive_finite(voltage)) invalid("voltage must be positive");
    if (!positive_finite(resistivity)) invalid("resistivity must be positive");
    if (!positive_finite(dt)) invalid("dt must be positive");
    if (!positive_finite(max_duration)) invalid("max duration must be positive");
}

std::vector<TimelineStep> straight_route_timeline(const RouteOptions& route, const DrivingCycle& cycle,
                                                  const SearchConfig& cfg) {
    route.validate();
    cfg.validate();

    std::vector<TimelineStep> steps;
    for (long k = 0;; ++k) {
        const double t = static_cast<double>(k) * route.dt;
        if (t > route.max_duration) break;
        const DriveState state = cycle(t);
        if (state.position > route.route_length) break;

        LadderScenario scene;
        scene.substation_voltage = route.voltage;
        scene.resistivity = route.resistivity;
        scene.wire_length = route.route_length;
        scene.pole_spacing = route.intersection_spacing;
        scene.feeds = {{route.substation_position, route.feeder_length}};
        scene.vehicles = {{std::max(0.0, state.position), state.power}};

        const auto result = search_efficient(assemble(scene.to_circuit()), cfg);
        TimelineStep step;
        step.time = t;
        step.position = state.position;
        step.speed = state.speed;
        step.demanded = state.power;
        step.alpha_hat = result.alpha_hat;
        step.received = result.alpha_hat * state.power;
        step.deficit_energy = (1.0 - result.alpha_hat) * state.power * route.dt;
        steps.push_back(step);
    }
    return steps;
}

}  // namespace tpf
