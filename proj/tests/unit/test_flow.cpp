#include "zdflow/error.hpp"
#include "zdflow/finder.hpp"
#include "zdflow/flow.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace zdflow;

namespace {

// Two vertices joined by an edge of weight w, vertex 2 the output.
LabelledOpenGraph path(Zd w, bool input, PauliLabel label) {
    const OpenGraph g(PrimeModulus(3), {"1", "2"}, {{"1", "2", w}},
                      input ? std::vector<std::string>{"1"} : std::vector<std::string>{}, {"2"});
    return {g, {label, std::nullopt}};
}

ZdFlow flow_of(const PrimeModulus& d, std::initializer_list<std::initializer_list<std::int64_t>> c,
               std::vector<VertexSet> layers) {
    return {FieldMatrix(d, c), std::move(layers)};
}

// All orders of V (first measured first) refining the layer order.
std::vector<std::vector<VertexId>> full_totalisations(const ZdFlow& f) {
    std::vector<std::vector<VertexId>> out{{}};
    for (auto it = f.layers.rbegin(); it != f.layers.rend(); ++it) {
        std::vector<std::vector<VertexId>> next;
        auto block = *it;
        std::sort(block.begin(), block.end());
        do {
            for (const auto& prefix : out) {
                auto o = prefix;
                o.insert(o.end(), block.begin(), block.end());
                next.push_back(std::move(o));
            }
        } while (std::next_permutation(block.begin(), block.end()));
        out = std::move(next);
    }
    return out;
}

} // namespace

TEST(ValidateFlow, NothingMeasuredIsValid) {
    const OpenGraph g(PrimeModulus(3), {"1", "2"}, {{"1", "2", 1}}, {}, {"1", "2"});
    const LabelledOpenGraph lg(g, {std::nullopt, std::nullopt});
    EXPECT_TRUE(validate_flow(lg, {FieldMatrix(g.modulus(), 2, 2), {{0, 1}}}).valid);
}

TEST(ValidateFlow, PathWithoutInputs) {
    for (Zd w : {1u, 2u}) {
        const auto lg = path(w, false, {1, 0});
        const auto f = flow_of(lg.graph().modulus(), {{1, 0}, {0, 0}}, {{1}, {0}});
        // (GC)_11 = G_12 C_21 = 0 = b and C_11 = 1 = a.
        const FieldMatrix gc = mat_mul(lg.graph().adjacency(), f.correction);
        EXPECT_EQ(gc(0, 0), 0u);
        EXPECT_TRUE(validate_flow(lg, f).valid);

        const CorrectionSets c = corrections(lg, f);
        EXPECT_EQ(c.x.at(0), (Multiset{0, 0}));
        EXPECT_EQ(c.z.at(0), (Multiset{0, w}));
        EXPECT_FALSE(c.x.contains(1));
    }
}

TEST(ValidateFlow, OutputColumnWitness) {
    const auto lg = path(1, false, {1, 0});
    const auto report = validate_flow(lg, flow_of(PrimeModulus(3), {{1, 1}, {0, 0}}, {{1}, {0}}));
    EXPECT_FALSE(report.valid);
    EXPECT_EQ(report.violated, FlowCondition::InputOutput);
    ASSERT_TRUE(report.witness);
    EXPECT_EQ(*report.witness, std::make_pair(VertexId{0}, VertexId{1}));
}

TEST(ValidateFlow, InputRowMustVanish) {
    // Measured input with label (1,0) would need C_11 = 1 on an input row.
    const auto bad = path(1, true, {1, 0});
    const auto report = validate_flow(bad, flow_of(PrimeModulus(3), {{1, 0}, {0, 0}}, {{1}, {0}}));
    EXPECT_EQ(report.violated, FlowCondition::InputOutput);
    EXPECT_EQ(*report.witness, std::make_pair(VertexId{0}, VertexId{0}));

    // With label (0,1) the correction sits on the output: C_21 = w^-1.
    for (Zd w : {1u, 2u}) {
        const auto lg = path(w, true, {0, 1});
        const Zd winv = PrimeModulus(3).inv(w);
        const auto f = flow_of(PrimeModulus(3), {{0, 0}, {winv, 0}}, {{1}, {0}});
        EXPECT_TRUE(validate_flow(lg, f).valid);
        EXPECT_EQ(corrections(lg, f).x.at(0), (Multiset{0, winv}));
    }
}

TEST(ValidateFlow, ReportsEachCondition) {
    const auto lg = path(1, false, {1, 0});
    const PrimeModulus d(3);
    EXPECT_EQ(validate_flow(lg, flow_of(d, {{2, 0}, {0, 0}}, {{1}, {0}})).violated, FlowCondition::LabelMatch);
    EXPECT_EQ(validate_flow(lg, flow_of(d, {{1, 0}, {0, 0}}, {{1}})).violated, FlowCondition::Partition);
    EXPECT_EQ(validate_flow(lg, flow_of(d, {{1, 0}, {0, 0}}, {{1}, {0}, {}})).violated, FlowCondition::Partition);
    EXPECT_EQ(validate_flow(lg, flow_of(d, {{1, 0}, {0, 0}}, {{0, 1}})).violated, FlowCondition::Layering);
    // Measuring 1 after 2 reverses the triangle.
    EXPECT_EQ(validate_flow(lg, flow_of(d, {{1, 0}, {0, 0}}, {{0}, {1}})).violated, FlowCondition::Layering);
    try {
        (void)validate_flow(lg, {FieldMatrix(d, 3, 3), {{0, 1}}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Corrections, RejectInvalidFlows) {
    const auto lg = path(1, false, {1, 0});
    try {
        (void)corrections(lg, flow_of(PrimeModulus(3), {{2, 0}, {0, 0}}, {{1}, {0}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidFlow);
    }
}

TEST(InducedOrder, Examples) {
    CorrectionSets outputs_only;
    outputs_only.x[0] = {0, 0, 1};
    outputs_only.z[1] = {0, 0, 2};
    EXPECT_TRUE(induced_order(outputs_only).pairs.empty());

    CorrectionSets single;
    single.x[0] = {0, 0};
    single.z[1] = {1, 0};
    single.x[1] = {0, 0};
    single.z[0] = {0, 0};
    const auto order = induced_order(single);
    EXPECT_TRUE(order.relates(0, 1));
    EXPECT_EQ(order.pairs.size(), 1u);

    CorrectionSets cycle = single;
    cycle.x[0] = {0, 1};
    try {
        (void)induced_order(cycle);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CyclicDependency);
    }
}

TEST(InducedOrder, IsTransitive) {
    CorrectionSets chain;
    chain.z[2] = {0, 1, 0};
    chain.z[1] = {1, 0, 0};
    chain.z[0] = {0, 0, 0};
    const auto order = induced_order(chain);
    EXPECT_TRUE(order.relates(1, 2));
    EXPECT_TRUE(order.relates(0, 1));
    EXPECT_TRUE(order.relates(0, 2));
}

TEST(TriangularForm, Examples) {
    const auto lg = path(1, false, {1, 0});
    const FieldMatrix c(PrimeModulus(3), {{1, 0}, {0, 0}});
    EXPECT_TRUE(check_triangular_form(lg, c, {0, 1}));
    EXPECT_FALSE(check_triangular_form(lg, c, {1, 0}));
    const OpenGraph all_out(PrimeModulus(3), {"1", "2"}, {{"1", "2", 1}}, {}, {"1", "2"});
    EXPECT_TRUE(check_triangular_form({all_out, {std::nullopt, std::nullopt}}, FieldMatrix(PrimeModulus(3), 2, 2),
                                      {1, 0}));
}

TEST(TriangularForm, EquivalentToValidityOnRandomFlows) {
    std::mt19937_64 rng(11);
    gen::GraphShape shape;
    shape.max_vertices = 5;
    std::size_t valid_seen = 0;
    std::size_t invalid_seen = 0;
    for (int t = 0; t < 400; ++t) {
        const auto inst = gen::random_flow_instance(rng, shape);
        ASSERT_TRUE(inst);
        ZdFlow f = inst->flow;
        // Half of the cases get one entry of C perturbed.
        if (t % 2 == 1) {
            const auto n = f.correction.rows();
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            const auto r = pick(rng);
            const auto c = pick(rng);
            f.correction.set(r, c, f.correction(r, c) + 1);
        }
        const bool valid = validate_flow(inst->graph, f).valid;
        bool all_pass = true;
        for (const auto& order : full_totalisations(f)) {
            all_pass = all_pass && check_triangular_form(inst->graph, f.correction, order);
        }
        EXPECT_EQ(valid, all_pass);
        (valid ? valid_seen : invalid_seen)++;
    }
    EXPECT_GT(valid_seen, 100u);
    EXPECT_GT(invalid_seen, 50u);
}

TEST(Corrections, RespectInputsAndLayerOrder) {
    std::mt19937_64 rng(12);
    gen::GraphShape shape;
    shape.max_vertices = 6;
    for (int t = 0; t < 300; ++t) {
        const auto inst = gen::random_flow_instance(rng, shape);
        ASSERT_TRUE(inst);
        const auto& g = inst->graph.graph();
        const auto c = corrections(inst->graph, inst->flow);
        const auto layer = layer_index(inst->flow, g.size());
        for (const auto& [v, x] : c.x) {
            EXPECT_EQ(x[v], 0u);
            EXPECT_EQ(c.z.at(v)[v], 0u);
            for (VertexId u = 0; u < g.size(); ++u) {
                if (g.is_input(u)) {
                    EXPECT_EQ(x[u], 0u);
                }
                // u measured strictly before v: no correction may reach it.
                if (layer[u] > layer[v]) {
                    EXPECT_EQ(x[u], 0u);
                    EXPECT_EQ(c.z.at(v)[u], 0u);
                }
            }
        }
        // u corrected by v means v sits in a strictly deeper layer.
        for (const auto& [u, v] : induced_order(c).pairs) {
            EXPECT_GT(layer[v], layer[u]);
        }
    }
}

TEST(Depth, LayersAndIndexing) {
    const ZdFlow single{FieldMatrix(PrimeModulus(3), 2, 2), {{0, 1}}};
    EXPECT_EQ(depth(single), 0u);
    const ZdFlow two{FieldMatrix(PrimeModulus(3), 2, 2), {{1}, {0}}};
    EXPECT_EQ(depth(two), 1u);
    EXPECT_EQ(layer_at(two, 0), (VertexSet{1}));
    EXPECT_EQ(layer_at(two, 1), (VertexSet{0}));
    try {
        (void)layer_at(two, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
    EXPECT_EQ(layer_index(two, 2), (std::vector<std::size_t>{1, 0}));
}

TEST(MoreDelayed, Examples) {
    const std::vector<VertexSet> lambda{{2, 3}, {1}};
    EXPECT_EQ(is_more_delayed(lambda, lambda), DelayComparison::NotMore);
    EXPECT_EQ(is_more_delayed(lambda, {{3}, {2}, {1}}), DelayComparison::More);
    EXPECT_EQ(is_more_delayed({{3}, {2}, {1}}, lambda), DelayComparison::NotMore);
    // Prefix sizes (2, 3, 5) against (1, 4, 5).
    EXPECT_EQ(is_more_delayed({{1, 2}, {3}, {4, 5}}, {{1}, {2, 3, 4}, {5}}), DelayComparison::Incomparable);
    try {
        (void)is_more_delayed({{1}}, {{2}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PartitionMismatch);
    }
}
