#include "zdflow/error.hpp"
#include "zdflow/finder.hpp"
#include "zdflow/io.hpp"

#include "error_code.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace zdflow;
using gen::code_of;

namespace {

const char* kPath = R"({"d": 3, "vertices": [1, 2], "edges": [[1, 2, 1]], "inputs": [], "outputs": [2],
                        "labels": {"1": [1, 0]}})";

} // namespace

TEST(GraphJson, ReadsIntegerAndStringNames) {
    const auto lg = graph_from_json(parse_json(kPath));
    EXPECT_EQ(lg.graph().names(), (std::vector<std::string>{"1", "2"}));
    EXPECT_EQ(lg.graph().weight(0, 1), 1u);
    EXPECT_EQ(lg.label(0), (PauliLabel{1, 0}));
    EXPECT_EQ(lg.graph().outputs(), VertexSet{1});
}

TEST(GraphJson, ModulusFromFileOrOverride) {
    Json j = parse_json(kPath);
    EXPECT_EQ(code_of([&] { (void)graph_from_json(j, true, 5); }), ErrorCode::MalformedInput);
    j.erase("d");
    EXPECT_EQ(code_of([&] { (void)graph_from_json(j); }), ErrorCode::MalformedInput);
    EXPECT_EQ(graph_from_json(j, true, 5).graph().modulus().value(), 5u);
    EXPECT_EQ(code_of([&] { (void)graph_from_json(j, true, 4); }), ErrorCode::NonPrimeModulus);
}

TEST(GraphJson, RejectsMalformedDocuments) {
    const auto code = [](const char* text, bool labels = true) {
        return code_of([&] { (void)graph_from_json(parse_json(text), labels); });
    };
    EXPECT_EQ(code("{"), ErrorCode::MalformedInput);
    EXPECT_EQ(code(R"({"d": 3})"), ErrorCode::MalformedInput);
    EXPECT_EQ(code(R"({"d": 3, "vertices": [1], "edges": [[1, 2]]})"), ErrorCode::MalformedInput);
    EXPECT_EQ(code(R"({"d": 3, "vertices": [1, 2], "edges": [[1, 3, 1]], "outputs": [1, 2]})"), ErrorCode::UnknownVertex);
    EXPECT_EQ(code(R"({"d": 3, "vertices": [1, 2], "outputs": [2]})"), ErrorCode::MissingLabel);
    EXPECT_EQ(code(R"({"d": 3, "vertices": [1, 2], "outputs": [2]})", false), std::nullopt);
    EXPECT_EQ(code(R"({"d": 3, "vertices": [1, 2], "outputs": [2], "labels": {"1": [0, 0]}})"), ErrorCode::ZeroLabel);
    EXPECT_EQ(code(R"({"d": 3, "vertices": [1, 2], "outputs": [2], "labels": {"1": [1]}})"), ErrorCode::MalformedInput);
    EXPECT_EQ(code(R"({"d": 3, "vertices": [1, 2], "edges": [[1, 2, -1]], "outputs": [1, 2]})"),
              ErrorCode::MalformedGraph);
}

TEST(GraphJson, RoundTripsRandomGraphs) {
    std::mt19937_64 rng(81);
    for (Zd d : {2u, 3u, 7u}) {
        gen::GraphShape shape;
        shape.d = d;
        shape.max_vertices = 7;
        for (int t = 0; t < 20; ++t) {
            const auto lg = gen::random_labelled_graph(rng, shape);
            EXPECT_EQ(graph_from_json(parse_json(graph_to_json(lg).dump())), lg);
        }
    }
}

TEST(FlowJson, RoundTripAndShapeChecks) {
    std::mt19937_64 rng(82);
    const auto inst = gen::random_flow_instance(rng, {}, true);
    ASSERT_TRUE(inst);
    const OpenGraph& g = inst->graph.graph();
    const Json j = flow_to_json(inst->flow, g);
    EXPECT_EQ(flow_from_json(j, g), inst->flow);
    Json bad = j;
    bad["C"].erase(0);
    EXPECT_EQ(code_of([&] { (void)flow_from_json(bad, g); }), ErrorCode::DimensionMismatch);
}

TEST(ScheduleJson, ListsRoundsFirstMeasuredFirst) {
    const auto lg = graph_from_json(parse_json(kPath));
    const auto s = schedule_to_json(lg, *find_flow(lg).flow);
    EXPECT_EQ(s.at("depth"), 1);
    ASSERT_EQ(s.at("rounds").size(), 1u);
    EXPECT_EQ(s.at("rounds")[0][0].at("vertex"), "1");
    EXPECT_EQ(s.at("outputs"), Json::array({"2"}));
}

TEST(PatternJson, ProductOrderIsReversed) {
    const Json j = parse_json(R"({"d": 3, "inputs": [], "outputs": ["b"], "order": "product",
        "commands": [{"op": "X", "target": "b", "signal": "a"}, {"op": "M", "vertex": "a", "label": [1, 0]},
                     {"op": "E", "u": "a", "v": "b"}, {"op": "N", "vertex": "b"}, {"op": "N", "vertex": "a"}]})");
    const Pattern p = pattern_from_json(j);
    EXPECT_EQ(p.names, (std::vector<std::string>{"a", "b"}));
    const std::vector<Command> expected{Command::n(0), Command::n(1), Command::e(0, 1, 1), Command::m(0, {1, 0}),
                                        Command::x(1, 0, 1)};
    EXPECT_EQ(p.commands, expected);
    EXPECT_EQ(pattern_to_json(p).at("order"), "execution");
    EXPECT_EQ(pattern_from_json(pattern_to_json(p)), p);
}

TEST(PatternJson, MultisetTargetsExpand) {
    const Json j = parse_json(R"({"d": 5, "vertices": ["a", "b", "c"], "outputs": ["b", "c"],
        "commands": [{"op": "M", "vertex": "a", "label": [0, 1], "angles": [0.1, 0.2, 0.3, 0.4]},
                     {"op": "Z", "target": {"b": 2, "c": 3}, "signal": "a", "power": 2}]})");
    const Pattern p = pattern_from_json(j);
    ASSERT_EQ(p.commands.size(), 3u);
    EXPECT_EQ(p.commands[1], Command::z(1, 0, 4));
    EXPECT_EQ(p.commands[2], Command::z(2, 0, 1));
    EXPECT_EQ(p.commands[0].angles.size(), 4u);
}

TEST(PatternJson, RejectsBadCommands) {
    const auto code = [](const char* commands) {
        const std::string text = std::string(R"({"d": 3, "vertices": ["a", "b"], "commands": )") + commands + "}";
        return code_of([&] { (void)pattern_from_json(parse_json(text)); });
    };
    EXPECT_EQ(code(R"([{"op": "Y", "vertex": "a"}])"), ErrorCode::MalformedInput);
    EXPECT_EQ(code(R"([{"op": "M", "vertex": "a", "label": [0, 0]}])"), ErrorCode::ZeroLabel);
    EXPECT_EQ(code(R"([{"op": "M", "vertex": "a", "label": [1, 0], "angles": [0.1]}])"), ErrorCode::MalformedInput);
    EXPECT_EQ(code(R"([{"op": "N", "vertex": "q"}])"), ErrorCode::UnknownVertex);
    EXPECT_EQ(code(R"({"op": "N"})"), ErrorCode::MalformedInput);
}

TEST(PatternJson, RoundTripsRandomPatterns) {
    std::mt19937_64 rng(83);
    for (int t = 0; t < 30; ++t) {
        const Pattern p = gen::random_runnable_pattern(rng, 5, 5, 12);
        const Pattern back = pattern_from_json(parse_json(pattern_to_json(p).dump()));
        ASSERT_EQ(back.commands.size(), p.commands.size());
        EXPECT_EQ(back.names, p.names);
        for (std::size_t i = 0; i < p.commands.size(); ++i) {
            EXPECT_EQ(back.commands[i].kind, p.commands[i].kind);
            EXPECT_EQ(back.commands[i].u, p.commands[i].u);
            for (std::size_t k = 0; k < p.commands[i].angles.size(); ++k) {
                EXPECT_DOUBLE_EQ(back.commands[i].angles[k], p.commands[i].angles[k]);
            }
        }
    }
}

TEST(MeasurementSpecJson, RoundTrip) {
    const PrimeModulus d(3);
    const MeasurementSpec spec{{1, 2}, {0.25, -1.5}};
    const auto back = measurement_spec_from_json(measurement_spec_to_json(spec), d);
    EXPECT_EQ(back.label, spec.label);
    EXPECT_EQ(back.angles, spec.angles);
}
