#pragma once

// Built-in networks: the two-node single-load circuit, reconstructions of the
// two trolleybus toy cases, and a single vehicle driving a straight route.
//
// Overhead wire model: the positive wire is a chain of nodes at distinct
// positions; substations and vehicles are rungs to the return conductor,
// which is the potential reference. Wire resistance between adjacent nodes
// is resistivity * distance.

#include "tractionpf/network.hpp"
#include "tractionpf/search.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tpf {

/// Source V at "source", load P at "load", resistor R between them.
CircuitSpec single_load_circuit(double volts, double ohms, double watts);

struct FeedPoint {
    double position = 0.0;       ///< m along the wire
    double feeder_length = 0.0;  ///< m of feeder cable to the substation
};

struct Vehicle {
    double position = 0.0;  ///< m along the wire
    double demand = 0.0;    ///< W, negative while braking regeneratively
};

struct LadderScenario {
    double substation_voltage = 600.0;
    double resistivity = 1.6e-4;  ///< ohm per metre of wire
    double wire_length = 0.0;
    double pole_spacing = 0.0;    ///< wire nodes every pole_spacing m; 0 = none
    std::vector<FeedPoint> feeds;
    std::vector<Vehicle> vehicles;  ///< strictly increasing positions

    /// Throws ValidationError on non-physical geometry.
    void validate() const;

    /// Wire nodes "wNNN" in position order, one source node "subK" per feed.
    [[nodiscard]] CircuitSpec to_circuit() const;
};

/// Span length and wire resistivity of the toy-case reconstructions
/// (0.064 ohm per span).
inline constexpr double kToySpan = 400.0;
inline constexpr double kToyResistivity = 1.6e-4;

/// Four vehicles (20, -5, 30, 260 kW) on a ten-pole line fed at one end.
LadderScenario toy_case_1();

/// Ten 250 kW vehicles on a twelve-pole line with two feed points.
LadderScenario toy_case_2();

struct DriveState {
    double position = 0.0;  ///< m
    double speed = 0.0;     ///< m/s
    double power = 0.0;     ///< W demanded
};

/// Vehicle state as a function of time (s).
using DrivingCycle = std::function<DriveState(double)>;

/// Periodic drive between equally spaced intersections: accelerate from
/// low_speed to high_speed, cruise, then brake regeneratively back to
/// low_speed just before the next intersection.
struct StopAndGoProfile {
    double low_speed = 4.0;
    double high_speed = 12.0;
    double acceleration = 1.2;  ///< m/s^2, also used for braking
    double accel_power = 180e3;
    double cruise_power = 30e3;
    double brake_power = -60e3;
};

DrivingCycle stop_and_go_cycle(double intersection_spacing, const StopAndGoProfile& profile = {});

/// Constant speed and constant demand.
DrivingCycle constant_cycle(double speed, double power);

struct RouteOptions {
    double route_length = 8000.0;
    double intersection_spacing = 200.0;
    double substation_position = 0.0;
    double feeder_length = 10.0;
    double voltage = 600.0;
    double resistivity = kToyResistivity;
    double dt = 1.0;
    double max_duration = 3600.0;

    void validate() const;
};

struct TimelineStep {
    double time = 0.0;
    double position = 0.0;
    double speed = 0.0;
    double demanded = 0.0;
    double alpha_hat = 0.0;
    double received = 0.0;        ///< alpha_hat * demanded
    double deficit_energy = 0.0;  ///< (1 - alpha_hat) * demanded * dt, J
};

/// Places the vehicle at every time step until it reaches the end of the
/// route, builds the circuit and runs search_efficient.
std::vector<TimelineStep> straight_route_timeline(const RouteOptions& route, const DrivingCycle& cycle,
                                                  const SearchConfig& cfg = {});

}  // namespace tpf
