#include "tractionpf/netlist.hpp"

#include "tractionpf/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace tpf {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void malformed(const std::string& message) {
    throw ValidationError(ValidationCode::malformed_input, message);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

void expect_keys(const ordered_json& obj, const std::string& where, const std::set<std::string>& required,
                 const std::set<std::string>& optional = {}) {
    if (!obj.is_object()) malformed(fmt::format("{}: expected an object", where));
    for (const auto& key : required) {
        if (!obj.contains(key)) malformed(fmt::format("{}: missing key '{}'", where, key));
    }
    for (const auto& [key, value] : obj.items()) {
        if (!required.contains(key) && !optional.contains(key)) {
            malformed(fmt::format("{}: unexpected key '{}'", where, key));
        }
    }
}

const ordered_json& array_at(const ordered_json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (!v.is_array()) malformed(fmt::format("{}: expected an array", key));
    return v;
}

std::string string_field(const ordered_json& obj, const std::string& where, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_string()) malformed(fmt::format("{}.{}: expected a string", where, key));
    return v.get<std::string>();
}

double number_field(const ordered_json& obj, const std::string& where, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) malformed(fmt::format("{}.{}: expected a number", where, key));
    return v.get<double>();
}

}  // namespace

CircuitSpec parse_netlist(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text.begin(), text.end());
    } catch (const ordered_json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        // nlohmann's message starts with "[json.exception.parse_error.101] "
        std::string what = e.what();
        if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
        malformed(fmt::format("line {}, column {}: {}", line, column, what));
    }

    expect_keys(doc, "netlist", {"nodes", "resistors", "sources"}, {"loads"});

    CircuitSpec spec;
    const auto& nodes = array_at(doc, "nodes");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (!nodes[k].is_string()) malformed(fmt::format("nodes[{}]: expected a string", k));
        spec.nodes.push_back(nodes[k].get<std::string>());
    }

    const auto& resistors = array_at(doc, "resistors");
    for (std::size_t k = 0; k < resistors.size(); ++k) {
        const auto where = fmt::format("resistors[{}]", k);
        expect_keys(resistors[k], where, {"a", "b", "ohms"});
        spec.resistors.push_back({string_field(resistors[k], where, "a"), string_field(resistors[k], where, "b"),
                                  number_field(resistors[k], where, "ohms")});
    }

    const auto& sources = array_at(doc, "sources");
    for (std::size_t k = 0; k < sources.size(); ++k) {
        const auto where = fmt::format("sources[{}]", k);
        expect_keys(sources[k], where, {"node", "volts"});
        spec.sources.push_back({string_field(sources[k], where, "node"), number_field(sources[k], where, "volts")});
    }

    if (doc.contains("loads")) {
        const auto& loads = array_at(doc, "loads");
        for (std::size_t k = 0; k < loads.size(); ++k) {
            const auto where = fmt::format("loads[{}]", k);
            expect_keys(loads[k], where, {"node", "watts"});
            spec.loads.push_back({string_field(loads[k], where, "node"), number_field(loads[k], where, "watts")});
        }
    }

    spec.validate();
    return spec;
}

CircuitSpec load_netlist(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        malformed(fmt::format("cannot open netlist '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_netlist(buf.str());
    } catch (const ValidationError& e) {
        throw ValidationError(e.code(), fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string dump_netlist(const CircuitSpec& spec) {
    ordered_json doc;
    doc["nodes"] = spec.nodes;
    doc["resistors"] = ordered_json::array();
    for (const auto& r : spec.resistors) {
        doc["resistors"].push_back({{"a", r.a}, {"b", r.b}, {"ohms", r.ohms}});
    }
    doc["sources"] = ordered_json::array();
    for (const auto& s : spec.sources) {
        doc["sources"].push_back({{"node", s.node}, {"volts", s.volts}});
    }
    doc["loads"] = ordered_json::array();
    for (const auto& l : spec.loads) {
        doc["loads"].push_back({{"node", l.node}, {"watts", l.watts}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace tpf
