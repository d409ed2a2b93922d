#include "spoofgrid/errors.hpp"
#include "spoofgrid/experiments.hpp"
#include "spoofgrid/scenario_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace spoofgrid {
namespace {

TEST(ScenarioIo, RoundTripsEveryPreset) {
    for (const auto& preset : scenario_presets()) {
        SCOPED_TRACE(preset.name);
        EXPECT_EQ(parse_scenario(scenario_to_json(preset.scenario)), preset.scenario);
    }
}

TEST(ScenarioIo, PartialOverrideKeepsBase) {
    Scenario base;
    base.toggle_probability = 0.5;
    const Scenario s = parse_scenario(R"({"manip_move_cost": -3.0, "terminal_mode": "one_shot"})", base);
    EXPECT_EQ(s.manip_move_cost, -3.0);
    EXPECT_EQ(s.terminal_mode, TerminalMode::OneShot);
    EXPECT_EQ(s.toggle_probability, 0.5);
    EXPECT_EQ(s.move_cost, -1.0);
}

TEST(ScenarioIo, RejectsBadInput) {
    EXPECT_THROW(parse_scenario(R"({"manip_cost": -3})"), ParseError);
    EXPECT_THROW(parse_scenario(R"({"discount": "high"})"), ParseError);
    EXPECT_THROW(parse_scenario(R"({"terminal_mode": "forever"})"), ParseError);
    EXPECT_THROW(parse_scenario("[1, 2]"), ParseError);
    EXPECT_THROW(parse_scenario("{\"discount\": "), ParseError);
    EXPECT_THROW(parse_scenario(R"({"discount": 1.2})"), ParseError);
}

TEST(ScenarioIo, LoadsFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "spoofgrid_scenario_io_test.json";
    {
        std::ofstream f(path);
        f << R"({"toggle_probability": 0.1})";
    }
    EXPECT_EQ(load_scenario(path).toggle_probability, 0.1);
    std::filesystem::remove(path);
    EXPECT_THROW(load_scenario(path), ParseError);
}

}  // namespace
}  // namespace spoofgrid
