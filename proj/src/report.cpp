#include "tractionpf/report.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <string>

namespace tpf {

using nlohmann::ordered_json;

std::string format_alpha(double alpha) { return fmt::format("{:.4f}", alpha); }

std::string format_value(double value) {
    const auto text = fmt::format("{:.6g}", value);
    return text == "-0" ? "0" : text;
}

namespace {

double reparse(const std::string& text) {
    double v = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), v);
    return v;
}

}  // namespace

double round_value(double value) { return std::isfinite(value) ? reparse(format_value(value)) : value; }

double round_alpha(double alpha) { return std::isfinite(alpha) ? reparse(format_alpha(alpha)) : alpha; }

namespace {

ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_value(v);
}

}  // namespace

ordered_json potentials_json(const MnaSystem& sys, const Potentials& phi) {
    ordered_json out = ordered_json::array();
    for (std::size_t k = 0; k < sys.size(); ++k) {
        out.push_back({{"node", sys.partition().name(k)}, {"volts", number(phi(static_cast<Eigen::Index>(k)))}});
    }
    return out;
}

ordered_json to_json(const BranchReport& r) {
    ordered_json out;
    out["alpha"] = round_alpha(r.alpha);
    out["resistors"] = ordered_json::array();
    for (const auto& b : r.resistors) {
        out["resistors"].push_back({{"a", b.a}, {"b", b.b}, {"ohms", number(b.ohms)}, {"current", number(b.current)}});
    }
    out["sources"] = ordered_json::array();
    for (const auto& s : r.sources) {
        out["sources"].push_back(
            {{"node", s.node}, {"volts", number(s.volts)}, {"current", number(s.current)}, {"power", number(s.power)}});
    }
    out["loads"] = ordered_json::array();
    for (const auto& l : r.loads) {
        out["loads"].push_back({{"node", l.node},
                                {"demanded", number(l.demanded)},
                                {"volts", number(l.potential)},
                                {"current", number(l.current)},
                                {"received", number(l.received)}});
    }
    out["losses"] = number(r.losses);
    return out;
}

ordered_json to_json(const SweepReport& r) {
    ordered_json out = ordered_json::array();
    for (const auto& rec : r.records) {
        out.push_back({{"alpha", round_alpha(rec.alpha)},
                       {"converged", rec.converged},
                       {"residual", number(rec.residual_norm)},
                       {"iterations", rec.iterations},
                       {"condition", rec.condition ? number(*rec.condition) : ordered_json(nullptr)}});
    }
    return out;
}

ordered_json to_json(const std::vector<TimelineStep>& steps) {
    ordered_json out = ordered_json::array();
    for (const auto& s : steps) {
        out.push_back({{"time", number(s.time)},
                       {"position", number(s.position)},
                       {"speed", number(s.speed)},
                       {"demanded", number(s.demanded)},
                       {"alpha", round_alpha(s.alpha_hat)},
                       {"received", number(s.received)},
                       {"deficit_energy", number(s.deficit_energy)}});
    }
    return out;
}

ordered_json to_json(const TimingSummary& t) {
    return {{"repetitions", t.repetitions},
            {"mean_seconds", number(t.mean_seconds)},
            {"min_seconds", number(t.min_seconds)},
            {"max_seconds", number(t.max_seconds)},
            {"alpha_hat", round_alpha(t.alpha_hat)},
            {"deterministic", t.deterministic}};
}

std::string potentials_csv(const MnaSystem& sys, const Potentials& phi) {
    std::string out = "node,volts\n";
    for (std::size_t k = 0; k < sys.size(); ++k) {
        out += fmt::format("{},{}\n", sys.partition().name(k), format_value(phi(static_cast<Eigen::Index>(k))));
    }
    return out;
}

std::string to_csv(const BranchReport& r) {
    std::string out = "kind,a,b,current,power\n";
    for (const auto& b : r.resistors) {
        out += fmt::format("resistor,{},{},{},{}\n", b.a, b.b, format_value(b.current),
                           format_value(b.current * b.current * b.ohms));
    }
    for (const auto& s : r.sources) {
        out += fmt::format("source,{},,{},{}\n", s.node, format_value(s.current), format_value(s.power));
    }
    for (const auto& l : r.loads) {
        out += fmt::format("load,{},,{},{}\n", l.node, format_value(l.current), format_value(l.received));
    }
    out += fmt::format("losses,,,,{}\n", format_value(r.losses));
    return out;
}

std::string to_csv(const SweepReport& r) {
    std::string out = "alpha,converged,residual,iterations,condition\n";
    for (const auto& rec : r.records) {
        out += fmt::format("{},{},{},{},{}\n", format_alpha(rec.alpha), rec.converged ? 1 : 0,
                           format_value(rec.residual_norm), rec.iterations,
                           rec.condition ? format_value(*rec.condition) : std::string());
    }
    return out;
}

std::string to_csv(const std::vector<TimelineStep>& steps) {
    std::string out = "time,position,speed,demanded,alpha,received,deficit_energy\n";
    for (const auto& s : steps) {
        out += fmt::format("{},{},{},{},{},{},{}\n", format_value(s.time), format_value(s.position),
                           format_value(s.speed), format_value(s.demanded), format_alpha(s.alpha_hat),
                           format_value(s.received), format_value(s.deficit_energy));
    }
    return out;
}

std::string potentials_table(const MnaSystem& sys, const Potentials& phi) {
    std::string out = fmt::format("{:<16} {:>14}\n", "node", "potential [V]");
    for (std::size_t k = 0; k < sys.size(); ++k) {
        out += fmt::format("{:<16} {:>14}\n", sys.partition().name(k), format_value(phi(static_cast<Eigen::Index>(k))));
    }
    return out;
}

std::string to_table(const BranchReport& r) {
    std::string out = fmt::format("{:<12} {:<12} {:>14} {:>14}\n", "from", "to", "current [A]", "loss [W]");
    for (const auto& b : r.resistors) {
        out += fmt::format("{:<12} {:<12} {:>14} {:>14}\n", b.a, b.b, format_value(b.current),
                           format_value(b.current * b.current * b.ohms));
    }
    out += fmt::format("\n{:<12} {:>14} {:>14}\n", "source", "current [A]", "power [W]");
    for (const auto& s : r.sources) {
        out += fmt::format("{:<12} {:>14} {:>14}\n", s.node, format_value(s.current), format_value(s.power));
    }
    if (!r.loads.empty()) {
        out += fmt::format("\n{:<12} {:>14} {:>14} {:>14}\n", "load", "demanded [W]", "received [W]", "current [A]");
        for (const auto& l : r.loads) {
            out += fmt::format("{:<12} {:>14} {:>14} {:>14}\n", l.node, format_value(l.demanded),
                               format_value(l.received), format_value(l.current));
        }
    }
    out += fmt::format("\ntotal losses: {} W\n", format_value(r.losses));
    return out;
}

std::string to_table(const SweepReport& r) {
    std::string out =
        fmt::format("{:>8} {:>9} {:>14} {:>6} {:>14}\n", "alpha", "converged", "residual", "iters", "condition");
    for (const auto& rec : r.records) {
        out += fmt::format("{:>8} {:>9} {:>14} {:>6} {:>14}\n", format_alpha(rec.alpha), rec.converged ? "yes" : "no",
                           format_value(rec.residual_norm), rec.iterations,
                           rec.condition ? format_value(*rec.condition) : std::string("-"));
    }
    return out;
}

std::string to_table(const std::vector<TimelineStep>& steps) {
    std::string out = fmt::format("{:>9} {:>10} {:>8} {:>13} {:>7} {:>13} {:>14}\n", "time [s]", "pos [m]",
                                  "v [m/s]", "demand [W]", "alpha", "received [W]", "deficit [J]");
    for (const auto& s : steps) {
        out += fmt::format("{:>9} {:>10} {:>8} {:>13} {:>7} {:>13} {:>14}\n", format_value(s.time),
                           format_value(s.position), format_value(s.speed), format_value(s.demanded),
                           format_alpha(s.alpha_hat), format_value(s.received), format_value(s.deficit_energy));
    }
    return out;
}

}  // namespace tpf
