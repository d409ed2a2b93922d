#include "spoofgrid/scenario_io.hpp"

#include "spoofgrid/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace spoofgrid {

using nlohmann::ordered_json;

namespace {

double number_field(const ordered_json& value, const std::string& key) {
    if (!value.is_number()) throw ParseError("scenario field '" + key + "' must be a number");
    return value.get<double>();
}

}  // namespace

Scenario parse_scenario(std::string_view json_text, const Scenario& base) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text.begin(), json_text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("scenario must be a JSON object");

    Scenario s = base;
    for (const auto& [key, value] : doc.items()) {
        if (key == "move_cost") s.move_cost = number_field(value, key);
        else if (key == "manip_move_cost") s.manip_move_cost = number_field(value, key);
        else if (key == "manip_edge_cost") s.manip_edge_cost = number_field(value, key);
        else if (key == "honest_collision_cost") s.honest_collision_cost = number_field(value, key);
        else if (key == "manip_collision_cost") s.manip_collision_cost = number_field(value, key);
        else if (key == "terminal_per_tick_reward") s.terminal_per_tick_reward = number_field(value, key);
        else if (key == "discount") s.discount = number_field(value, key);
        else if (key == "toggle_probability") s.toggle_probability = number_field(value, key);
        else if (key == "terminal_mode") {
            if (!value.is_string()) throw ParseError("scenario field 'terminal_mode' must be a string");
            const auto mode = parse_terminal_mode(value.get<std::string>());
            if (!mode) throw ParseError("unknown terminal_mode '" + value.get<std::string>() + "'");
            s.terminal_mode = *mode;
        } else {
            throw ParseError("unknown scenario key '" + key + "'");
        }
    }
    try {
        s.validate();
    } catch (const ContractViolation& e) {
        throw ParseError(std::string("invalid scenario: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path, const Scenario& base) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str(), base);
}

std::string scenario_to_json(const Scenario& s) {
    ordered_json doc;
    doc["move_cost"] = s.move_cost;
    doc["manip_move_cost"] = s.manip_move_cost;
    doc["manip_edge_cost"] = s.manip_edge_cost;
    doc["honest_collision_cost"] = s.honest_collision_cost;
    doc["manip_collision_cost"] = s.manip_collision_cost;
    doc["terminal_per_tick_reward"] = s.terminal_per_tick_reward;
    doc["discount"] = s.discount;
    doc["toggle_probability"] = s.toggle_probability;
    doc["terminal_mode"] = std::string(to_string(s.terminal_mode));
    return doc.dump(2) + "\n";
}

}  // namespace spoofgrid
