#include "zdflow/error.hpp"
#include "zdflow/oracle.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace zdflow;

TEST(Oracle, NothingMeasured) {
    const OpenGraph g(PrimeModulus(3), {"1", "2"}, {{"1", "2", 1}}, {}, {"1", "2"});
    const LabelledOpenGraph lg(g, Labelling(2));
    EXPECT_EQ(*brute_delayed_layers(lg), (std::vector<VertexSet>{{0, 1}}));
    const auto r = brute_min_depth(lg);
    EXPECT_TRUE(r.exists);
    EXPECT_EQ(*r.min_depth, 0u);
}

TEST(Oracle, Path) {
    const OpenGraph g(PrimeModulus(3), {"1", "2"}, {{"1", "2", 2}}, {}, {"2"});
    const LabelledOpenGraph lg(g, {PauliLabel{1, 0}, std::nullopt});
    EXPECT_EQ(*brute_delayed_layers(lg), (std::vector<VertexSet>{{1}, {0}}));
    const auto r = brute_min_depth(lg);
    ASSERT_TRUE(r.exists);
    EXPECT_EQ(*r.min_depth, 1u);
    EXPECT_TRUE(validate_flow(lg, *r.witness).valid);
}

TEST(Oracle, NoOutputsWithEdges) {
    const OpenGraph g(PrimeModulus(3), {"1", "2", "3"}, {{"1", "2", 1}, {"2", "3", 1}, {"1", "3", 1}}, {}, {});
    const LabelledOpenGraph lg(g, {PauliLabel{1, 0}, PauliLabel{1, 0}, PauliLabel{1, 0}});
    EXPECT_FALSE(brute_delayed_layers(lg));
    EXPECT_FALSE(brute_min_depth(lg).exists);
}

TEST(Oracle, EnforcesLimits) {
    const OpenGraph big(PrimeModulus(3), gen::numbered_names(7), {}, {}, gen::numbered_names(7));
    const OpenGraph wide(PrimeModulus(7), {"1"}, {}, {}, {"1"});
    for (const auto& g : {big, wide}) {
        try {
            (void)brute_min_depth({g, Labelling(g.size())});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InstanceTooLarge);
        }
    }
    EXPECT_TRUE(brute_min_depth({wide, Labelling(1)}, {6, 7}).exists);
}

TEST(Oracle, BothSearchesAgree) {
    std::mt19937_64 rng(31);
    gen::GraphShape shape;
    shape.max_vertices = 5;
    std::size_t found = 0;
    for (int t = 0; t < 150; ++t) {
        const auto lg = gen::random_labelled_graph(rng, shape);
        const auto layers = brute_delayed_layers(lg);
        const auto r = brute_min_depth(lg);
        ASSERT_EQ(layers.has_value(), r.exists);
        if (r.exists) {
            ++found;
            EXPECT_EQ(layers->size() - 1, *r.min_depth);
            EXPECT_TRUE(validate_flow(lg, *r.witness).valid);
            EXPECT_EQ(depth(*r.witness), *r.min_depth);
        }
    }
    EXPECT_GT(found, 20u);
}
