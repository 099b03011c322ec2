#include "tractionpf/analysis.hpp"
#include "tractionpf/errors.hpp"
#include "tractionpf/linsolve.hpp"
#include "tractionpf/netlist.hpp"
#include "tractionpf/network.hpp"
#include "tractionpf/newton.hpp"
#include "tractionpf/scenarios.hpp"
#include "tractionpf/search.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pybind11::literals;

PYBIND11_MODULE(_core, m) {
    m.doc() = "DC power flow with maximal uniform demand scaling for overhead-wire traction networks";

    static py::exception<tpf::ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
    static py::exception<tpf::EvaluationError> evaluation_error(m, "EvaluationError", PyExc_ArithmeticError);
    static py::exception<tpf::PreconditionError> precondition_error(m, "PreconditionError", PyExc_RuntimeError);
    static py::exception<tpf::SearchError> search_error(m, "SearchError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const tpf::ValidationError& e) {
            py::set_error(validation_error, e.what());
        } catch (const tpf::EvaluationError& e) {
            py::set_error(evaluation_error, e.what());
        } catch (const tpf::PreconditionError& e) {
            py::set_error(precondition_error, e.what());
        } catch (const tpf::SearchError& e) {
            py::set_error(search_error, e.what());
        }
    });

    // network
    py::class_<tpf::Resistor>(m, "Resistor")
        .def(py::init<std::string, std::string, double>(), "a"_a, "b"_a, "ohms"_a)
        .def_readwrite("a", &tpf::Resistor::a)
        .def_readwrite("b", &tpf::Resistor::b)
        .def_readwrite("ohms", &tpf::Resistor::ohms);
    py::class_<tpf::VoltageSource>(m, "VoltageSource")
        .def(py::init<std::string, double>(), "node"_a, "volts"_a)
        .def_readwrite("node", &tpf::VoltageSource::node)
        .def_readwrite("volts", &tpf::VoltageSource::volts);
    py::class_<tpf::PowerLoad>(m, "PowerLoad")
        .def(py::init<std::string, double>(), "node"_a, "watts"_a)
        .def_readwrite("node", &tpf::PowerLoad::node)
        .def_readwrite("watts", &tpf::PowerLoad::watts);
    py::class_<tpf::CircuitSpec>(m, "CircuitSpec")
        .def(py::init<>())
        .def(py::init([](std::vector<std::string> nodes, std::vector<tpf::Resistor> resistors,
                         std::vector<tpf::VoltageSource> sources, std::vector<tpf::PowerLoad> loads) {
                 return tpf::CircuitSpec{std::move(nodes), std::move(resistors), std::move(sources), std::move(loads)};
             }),
             "nodes"_a, "resistors"_a, "sources"_a, "loads"_a = std::vector<tpf::PowerLoad>{})
        .def_readwrite("nodes", &tpf::CircuitSpec::nodes)
        .def_readwrite("resistors", &tpf::CircuitSpec::resistors)
        .def_readwrite("sources", &tpf::CircuitSpec::sources)
        .def_readwrite("loads", &tpf::CircuitSpec::loads)
        .def("validate", &tpf::CircuitSpec::validate)
        .def(py::self == py::self);

    py::class_<tpf::MnaSystem>(m, "MnaSystem")
        .def_property_readonly("matrix", &tpf::MnaSystem::matrix)
        .def("dense_matrix", &tpf::MnaSystem::dense_matrix)
        .def_property_readonly("demand", &tpf::MnaSystem::demand)
        .def_property_readonly("source", &tpf::MnaSystem::source)
        .def_property_readonly("order", [](const tpf::MnaSystem& s) { return s.partition().order(); })
        .def_property_readonly("resistor_count", [](const tpf::MnaSystem& s) { return s.partition().resistor_count(); })
        .def_property_readonly("load_count", [](const tpf::MnaSystem& s) { return s.partition().load_count(); })
        .def_property_readonly("source_count", [](const tpf::MnaSystem& s) { return s.partition().source_count(); })
        .def("index_of", [](const tpf::MnaSystem& s, const std::string& id) { return s.partition().index_of(id); })
        .def("__len__", &tpf::MnaSystem::size);

    m.def("assemble", &tpf::assemble, "spec"_a);
    m.def("rhs", &tpf::rhs, "sys"_a, "phi"_a, "alpha"_a);
    m.def("residual", &tpf::residual, "sys"_a, "phi"_a, "alpha"_a);
    m.def("jacobian", &tpf::jacobian, "sys"_a, "phi"_a, "alpha"_a);

    // linsolve
    py::class_<tpf::LinearSolveReport>(m, "LinearSolveReport")
        .def_readonly("solution", &tpf::LinearSolveReport::solution)
        .def_readonly("log_abs_det", &tpf::LinearSolveReport::log_abs_det)
        .def_readonly("singular", &tpf::LinearSolveReport::singular);
    m.def("solve_linear", py::overload_cast<const tpf::DenseMatrix&, const tpf::Vector&>(&tpf::solve_linear), "a"_a,
          "rhs"_a);
    m.def("condition_estimate", py::overload_cast<const tpf::DenseMatrix&>(&tpf::condition_estimate), "a"_a);

    // newton
    py::enum_<tpf::NrStatus>(m, "NrStatus")
        .value("converged", tpf::NrStatus::converged)
        .value("iteration_limit", tpf::NrStatus::iteration_limit)
        .value("singular_jacobian", tpf::NrStatus::singular_jacobian)
        .value("non_finite", tpf::NrStatus::non_finite);
    py::class_<tpf::NrConfig>(m, "NrConfig")
        .def(py::init([](double delta_con, int max_iters) { return tpf::NrConfig{delta_con, max_iters}; }),
             "delta_con"_a = 1e-8, "max_iters"_a = 10)
        .def_readwrite("delta_con", &tpf::NrConfig::delta_con)
        .def_readwrite("max_iters", &tpf::NrConfig::max_iters);
    py::class_<tpf::NrOutcome>(m, "NrOutcome")
        .def_readonly("converged", &tpf::NrOutcome::converged)
        .def_readonly("status", &tpf::NrOutcome::status)
        .def_readonly("phi", &tpf::NrOutcome::phi)
        .def_readonly("iterations", &tpf::NrOutcome::iterations)
        .def_readonly("final_residual_norm", &tpf::NrOutcome::final_residual_norm)
        .def_readonly("log_abs_det", &tpf::NrOutcome::log_abs_det)
        .def_readonly("residual_history", &tpf::NrOutcome::residual_history);
    m.def("initial_guess", &tpf::initial_guess, "sys"_a);
    m.def("zero_demand_solution", &tpf::zero_demand_solution, "sys"_a);
    m.def("start_point", &tpf::start_point, "sys"_a);
    m.def("newton_solve", &tpf::newton_solve, "sys"_a, "alpha"_a, "phi_init"_a, "cfg"_a = tpf::NrConfig{});

    // search
    py::class_<tpf::SearchConfig>(m, "SearchConfig")
        .def(py::init([](double delta_alpha, double delta_opt, double delta_act, double c_bi, tpf::NrConfig nr,
                         int max_outer) {
                 return tpf::SearchConfig{delta_alpha, delta_opt, delta_act, c_bi, nr, max_outer};
             }),
             "delta_alpha"_a = 1e-2, "delta_opt"_a = 1e-5, "delta_act"_a = 1e-2, "c_bi"_a = 0.5,
             "nr"_a = tpf::NrConfig{}, "max_outer"_a = 200)
        .def_readwrite("delta_alpha", &tpf::SearchConfig::delta_alpha)
        .def_readwrite("delta_opt", &tpf::SearchConfig::delta_opt)
        .def_readwrite("delta_act", &tpf::SearchConfig::delta_act)
        .def_readwrite("c_bi", &tpf::SearchConfig::c_bi)
        .def_readwrite("nr", &tpf::SearchConfig::nr)
        .def_readwrite("max_outer", &tpf::SearchConfig::max_outer);
    py::class_<tpf::TraceEntry>(m, "TraceEntry")
        .def_readonly("alpha", &tpf::TraceEntry::alpha)
        .def_readonly("converged", &tpf::TraceEntry::converged)
        .def_readonly("status", &tpf::TraceEntry::status)
        .def_readonly("iterations", &tpf::TraceEntry::iterations)
        .def_readonly("max_iters", &tpf::TraceEntry::max_iters)
        .def_readonly("residual_norm", &tpf::TraceEntry::residual_norm);
    py::class_<tpf::SearchResult>(m, "SearchResult")
        .def_readonly("alpha_hat", &tpf::SearchResult::alpha_hat)
        .def_readonly("phi_hat", &tpf::SearchResult::phi_hat)
        .def_readonly("fully_supplied", &tpf::SearchResult::fully_supplied)
        .def_readonly("trace", &tpf::SearchResult::trace)
        .def_readonly("failed_buffer_final", &tpf::SearchResult::failed_buffer_final)
        .def_readonly("outer_iterations", &tpf::SearchResult::outer_iterations)
        .def_readonly("bisections", &tpf::SearchResult::bisections);
    m.def("search_basic", &tpf::search_basic, "sys"_a, "cfg"_a = tpf::SearchConfig{});
    m.def("search_efficient", &tpf::search_efficient, "sys"_a, "cfg"_a = tpf::SearchConfig{});
    m.def(
        "verify_dichotomy",
        [](const tpf::MnaSystem& sys, double alpha_hat, std::size_t grid_size) {
            const auto check = tpf::verify_dichotomy(sys, alpha_hat, grid_size);
            return py::make_tuple(check.holds, check.offending_alpha);
        },
        "sys"_a, "alpha_hat"_a, "grid_size"_a, "Returns (holds, offending_alpha).");

    // analysis
    py::class_<tpf::BranchCurrent>(m, "BranchCurrent")
        .def_readonly("a", &tpf::BranchCurrent::a)
        .def_readonly("b", &tpf::BranchCurrent::b)
        .def_readonly("ohms", &tpf::BranchCurrent::ohms)
        .def_readonly("current", &tpf::BranchCurrent::current);
    py::class_<tpf::SourceFlow>(m, "SourceFlow")
        .def_readonly("node", &tpf::SourceFlow::node)
        .def_readonly("volts", &tpf::SourceFlow::volts)
        .def_readonly("current", &tpf::SourceFlow::current)
        .def_readonly("power", &tpf::SourceFlow::power);
    py::class_<tpf::LoadFlow>(m, "LoadFlow")
        .def_readonly("node", &tpf::LoadFlow::node)
        .def_readonly("demanded", &tpf::LoadFlow::demanded)
        .def_readonly("potential", &tpf::LoadFlow::potential)
        .def_readonly("current", &tpf::LoadFlow::current)
        .def_readonly("received", &tpf::LoadFlow::received);
    py::class_<tpf::BranchReport>(m, "BranchReport")
        .def_readonly("alpha", &tpf::BranchReport::alpha)
        .def_readonly("resistors", &tpf::BranchReport::resistors)
        .def_readonly("sources", &tpf::BranchReport::sources)
        .def_readonly("loads", &tpf::BranchReport::loads)
        .def_readonly("losses", &tpf::BranchReport::losses)
        .def("source_power", &tpf::BranchReport::source_power)
        .def("received_power", &tpf::BranchReport::received_power);
    m.def("branch_report", &tpf::branch_report, "spec"_a, "sys"_a, "phi"_a, "alpha"_a, "delta_con"_a = 1e-8);

    py::class_<tpf::SweepRecord>(m, "SweepRecord")
        .def_readonly("alpha", &tpf::SweepRecord::alpha)
        .def_readonly("converged", &tpf::SweepRecord::converged)
        .def_readonly("residual_norm", &tpf::SweepRecord::residual_norm)
        .def_readonly("iterations", &tpf::SweepRecord::iterations)
        .def_readonly("condition", &tpf::SweepRecord::condition);
    py::class_<tpf::SweepReport>(m, "SweepReport").def_readonly("records", &tpf::SweepReport::records);
    m.def(
        "alpha_sweep",
        [](const tpf::MnaSystem& sys, const std::vector<double>& grid, const tpf::NrConfig& cfg, bool warm_start) {
            return tpf::alpha_sweep(sys, grid, cfg, warm_start ? tpf::SweepMode::warm_start : tpf::SweepMode::independent);
        },
        "sys"_a, "grid"_a, "cfg"_a = tpf::NrConfig{}, "warm_start"_a = true);
    m.def("uniform_grid", &tpf::uniform_grid, "n"_a);

    py::class_<tpf::TimingSummary>(m, "TimingSummary")
        .def_readonly("repetitions", &tpf::TimingSummary::repetitions)
        .def_readonly("mean_seconds", &tpf::TimingSummary::mean_seconds)
        .def_readonly("min_seconds", &tpf::TimingSummary::min_seconds)
        .def_readonly("max_seconds", &tpf::TimingSummary::max_seconds)
        .def_readonly("alpha_hat", &tpf::TimingSummary::alpha_hat)
        .def_readonly("deterministic", &tpf::TimingSummary::deterministic);
    m.def("timing_harness", &tpf::timing_harness, "spec"_a, "repetitions"_a, "cfg"_a = tpf::SearchConfig{});

    // scenarios
    py::class_<tpf::FeedPoint>(m, "FeedPoint")
        .def(py::init<double, double>(), "position"_a, "feeder_length"_a)
        .def_readwrite("position", &tpf::FeedPoint::position)
        .def_readwrite("feeder_length", &tpf::FeedPoint::feeder_length);
    py::class_<tpf::Vehicle>(m, "Vehicle")
        .def(py::init<double, double>(), "position"_a, "demand"_a)
        .def_readwrite("position", &tpf::Vehicle::position)
        .def_readwrite("demand", &tpf::Vehicle::demand);
    py::class_<tpf::LadderScenario>(m, "LadderScenario")
        .def(py::init<>())
        .def_readwrite("substation_voltage", &tpf::LadderScenario::substation_voltage)
        .def_readwrite("resistivity", &tpf::LadderScenario::resistivity)
        .def_readwrite("wire_length", &tpf::LadderScenario::wire_length)
        .def_readwrite("pole_spacing", &tpf::LadderScenario::pole_spacing)
        .def_readwrite("feeds", &tpf::LadderScenario::feeds)
        .def_readwrite("vehicles", &tpf::LadderScenario::vehicles)
        .def("to_circuit", &tpf::LadderScenario::to_circuit);
    m.def("single_load_circuit", &tpf::single_load_circuit, "volts"_a, "ohms"_a, "watts"_a);
    m.def("toy_case_1", &tpf::toy_case_1);
    m.def("toy_case_2", &tpf::toy_case_2);

    py::class_<tpf::RouteOptions>(m, "RouteOptions")
        .def(py::init<>())
        .def_readwrite("route_length", &tpf::RouteOptions::route_length)
        .def_readwrite("intersection_spacing", &tpf::RouteOptions::intersection_spacing)
        .def_readwrite("substation_position", &tpf::RouteOptions::substation_position)
        .def_readwrite("feeder_length", &tpf::RouteOptions::feeder_length)
        .def_readwrite("voltage", &tpf::RouteOptions::voltage)
        .def_readwrite("resistivity", &tpf::RouteOptions::resistivity)
        .def_readwrite("dt", &tpf::RouteOptions::dt)
        .def_readwrite("max_duration", &tpf::RouteOptions::max_duration);
    py::class_<tpf::TimelineStep>(m, "TimelineStep")
        .def_readonly("time", &tpf::TimelineStep::time)
        .def_readonly("position", &tpf::TimelineStep::position)
        .def_readonly("speed", &tpf::TimelineStep::speed)
        .def_readonly("demanded", &tpf::TimelineStep::demanded)
        .def_readonly("alpha_hat", &tpf::TimelineStep::alpha_hat)
        .def_readonly("received", &tpf::TimelineStep::received)
        .def_readonly("deficit_energy", &tpf::TimelineStep::deficit_energy);
    m.def(
        "straight_route_timeline",
        [](const tpf::RouteOptions& route, std::optional<double> constant_power, double speed) {
            const auto cycle = constant_power ? tpf::constant_cycle(speed, *constant_power)
                                              : tpf::stop_and_go_cycle(route.intersection_spacing);
            return tpf::straight_route_timeline(route, cycle);
        },
        "route"_a = tpf::RouteOptions{}, "constant_power"_a = py::none(), "speed"_a = 10.0,
        "Stop-and-go drive by default; constant speed and demand when constant_power is given.");

    // netlist
    m.def("parse_netlist", [](const std::string& text) { return tpf::parse_netlist(text); }, "text"_a);
    m.def("dump_netlist", &tpf::dump_netlist, "spec"_a);
}
