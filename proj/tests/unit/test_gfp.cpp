#include "zdflow/error.hpp"
#include "zdflow/gfp.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace zdflow;

namespace {

// Naive product over the integers, reduced at the end.
FieldMatrix integer_product(const FieldMatrix& a, const FieldMatrix& b) {
    FieldMatrix out(a.modulus(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::int64_t acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc += static_cast<std::int64_t>(a(i, k)) * b(k, j);
            }
            out.set(i, j, acc);
        }
    }
    return out;
}

// All x in Z_d^n with A x = b, by enumeration.
std::vector<FieldVector> all_solutions(const FieldMatrix& a, const FieldVector& b) {
    const Zd d = a.modulus().value();
    std::size_t total = 1;
    for (std::size_t i = 0; i < a.cols(); ++i) {
        total *= d;
    }
    std::vector<FieldVector> out;
    for (std::size_t code = 0; code < total; ++code) {
        FieldVector x(a.cols());
        std::size_t rest = code;
        for (auto& xi : x) {
            xi = static_cast<Zd>(rest % d);
            rest /= d;
        }
        if (mat_vec(a, x) == b) {
            out.push_back(x);
        }
    }
    return out;
}

FieldMatrix random_matrix(std::mt19937_64& rng, const PrimeModulus& d, std::size_t r, std::size_t c) {
    FieldMatrix m(d, r, c);
    std::uniform_int_distribution<Zd> e(0, d.value() - 1);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            m.set(i, j, e(rng));
        }
    }
    return m;
}

} // namespace

TEST(PrimeModulus, AcceptsPrimesRejectsOthers) {
    EXPECT_EQ(PrimeModulus(2).value(), 2u);
    EXPECT_EQ(PrimeModulus(97).value(), 97u);
    for (Zd bad : {0u, 1u, 4u, 9u, 91u}) {
        try {
            (void)PrimeModulus(bad);
            FAIL() << bad << " accepted";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::NonPrimeModulus);
        }
    }
    try {
        (void)PrimeModulus(101);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ModulusTooLarge);
    }
    EXPECT_EQ(PrimeModulus(101, 200).value(), 101u);
}

TEST(FieldInv, SmallExamples) {
    EXPECT_EQ(field_inv(FieldElement(PrimeModulus(3), 2)).value(), 2u);
    EXPECT_EQ(field_inv(FieldElement(PrimeModulus(5), 3)).value(), 2u);
    try {
        (void)field_inv(FieldElement(PrimeModulus(7), 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroInverse);
    }
}

TEST(FieldInv, InverseOfInverseForAllUnits) {
    for (Zd p : {2u, 3u, 5u, 7u, 11u, 13u, 97u}) {
        const PrimeModulus d(p);
        for (Zd a = 1; a < p; ++a) {
            const FieldElement x(d, a);
            EXPECT_EQ((x * field_inv(x)).value(), 1u);
            EXPECT_EQ(field_inv(field_inv(x)), x);
        }
    }
}

TEST(FieldElement, ReducesNegativeValues) {
    const PrimeModulus d(5);
    EXPECT_EQ(FieldElement(d, -1).value(), 4u);
    EXPECT_EQ((FieldElement(d, 2) - FieldElement(d, 4)).value(), 3u);
    EXPECT_EQ(d.pow(2, 4), 1u);
}

TEST(MatMul, SmallExampleMatchesIntegerProduct) {
    const PrimeModulus d(3);
    const FieldMatrix a(d, {{1, 2}, {0, 1}});
    const FieldMatrix b(d, {{1, 0}, {1, 1}});
    EXPECT_EQ(mat_mul(a, b), integer_product(a, b));
    EXPECT_EQ(mat_mul(a, b), FieldMatrix(d, {{0, 2}, {1, 1}}));
}

TEST(MatMul, IdentityAndZero) {
    std::mt19937_64 rng(1);
    const PrimeModulus d(5);
    const FieldMatrix b = random_matrix(rng, d, 3, 4);
    EXPECT_EQ(mat_mul(FieldMatrix::identity(d, 3), b), b);
    EXPECT_TRUE(mat_mul(FieldMatrix(d, 2, 3), b).is_zero());
}

TEST(MatMul, RejectsShapeAndModulusMismatch) {
    const FieldMatrix a(PrimeModulus(3), 2, 3);
    try {
        (void)mat_mul(a, a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    EXPECT_THROW((void)mat_mul(a, FieldMatrix(PrimeModulus(5), 3, 1)), Error);
}

TEST(MatMul, RandomAgreesWithIntegerProduct) {
    std::mt19937_64 rng(2);
    for (Zd p : {2u, 3u, 7u, 97u}) {
        const PrimeModulus d(p);
        for (int t = 0; t < 20; ++t) {
            const auto a = random_matrix(rng, d, 4, 5);
            const auto b = random_matrix(rng, d, 5, 3);
            EXPECT_EQ(mat_mul(a, b), integer_product(a, b));
        }
    }
}

TEST(SolveAll, IdentityReturnsRightHandSide) {
    const PrimeModulus d(7);
    const FieldMatrix b(d, {{3, 0}, {6, 1}, {2, 5}});
    const auto out = solve_all(FieldMatrix::identity(d, 3), b);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_TRUE(out[0].solvable);
    EXPECT_EQ(out[0].solution, b.column(0));
    EXPECT_EQ(out[1].solution, b.column(1));
}

TEST(SolveAll, WorkedExamples) {
    const PrimeModulus d(3);
    const auto square = solve_all(FieldMatrix(d, {{1, 2}, {0, 1}}), FieldMatrix(d, {{1}, {2}}));
    ASSERT_TRUE(square[0].solvable);
    EXPECT_EQ(square[0].solution, (FieldVector{0, 2}));

    const FieldMatrix a(d, {{1, 1}, {2, 2}});
    const auto out = solve_all(a, FieldMatrix(d, {{1, 1}, {2, 0}}));
    ASSERT_TRUE(out[0].solvable);
    EXPECT_EQ(mat_vec(a, out[0].solution), (FieldVector{1, 2}));
    EXPECT_EQ(out[0].solution, (FieldVector{1, 0}));
    EXPECT_FALSE(out[1].solvable);
    EXPECT_TRUE(all_solutions(a, {1, 0}).empty());
}

TEST(SolveAll, ExhaustiveAgreementWithEnumeration) {
    std::mt19937_64 rng(3);
    for (Zd p : {2u, 3u, 5u}) {
        const PrimeModulus d(p);
        for (std::size_t rows = 1; rows <= 3; ++rows) {
            for (std::size_t cols = 1; cols <= 3; ++cols) {
                for (int t = 0; t < 10; ++t) {
                    const auto a = random_matrix(rng, d, rows, cols);
                    // Every right-hand side in Z_d^rows, batched into one call.
                    std::size_t total = 1;
                    for (std::size_t i = 0; i < rows; ++i) {
                        total *= p;
                    }
                    FieldMatrix b(d, rows, total);
                    for (std::size_t code = 0; code < total; ++code) {
                        std::size_t rest = code;
                        for (std::size_t i = 0; i < rows; ++i) {
                            b.set(i, code, static_cast<std::int64_t>(rest % p));
                            rest /= p;
                        }
                    }
                    const auto out = solve_all(a, b);
                    for (std::size_t code = 0; code < total; ++code) {
                        const auto truth = all_solutions(a, b.column(code));
                        ASSERT_EQ(out[code].solvable, !truth.empty());
                        if (out[code].solvable) {
                            EXPECT_EQ(mat_vec(a, out[code].solution), b.column(code));
                        }
                    }
                }
            }
        }
    }
}

TEST(SolveAll, PlantedSolutionsAlwaysSolvable) {
    std::mt19937_64 rng(4);
    for (Zd p : {3u, 5u, 13u}) {
        const PrimeModulus d(p);
        for (int t = 0; t < 50; ++t) {
            const auto a = random_matrix(rng, d, 6, 4);
            const auto x0 = random_matrix(rng, d, 4, 3);
            const auto out = solve_all(a, mat_mul(a, x0));
            for (std::size_t c = 0; c < 3; ++c) {
                ASSERT_TRUE(out[c].solvable);
                EXPECT_EQ(mat_vec(a, out[c].solution), mat_mul(a, x0).column(c));
            }
        }
    }
}

TEST(SolveAll, EmptyColumnsAndRows) {
    const PrimeModulus d(3);
    // No unknowns: solvable exactly for the zero right-hand side.
    const auto out = solve_all(FieldMatrix(d, 2, 0), FieldMatrix(d, {{0, 1}, {0, 0}}));
    EXPECT_TRUE(out[0].solvable);
    EXPECT_TRUE(out[0].solution.empty());
    EXPECT_FALSE(out[1].solvable);
    // No equations: everything solvable with free variables at 0.
    const auto free = solve_all(FieldMatrix(d, 0, 2), FieldMatrix(d, 0, 1));
    EXPECT_TRUE(free[0].solvable);
    EXPECT_EQ(free[0].solution, (FieldVector{0, 0}));
}

TEST(SolveAll, CountsWork) {
    const PrimeModulus d(5);
    EliminationStats stats;
    (void)solve_all(FieldMatrix(d, {{1, 2}, {3, 4}}), FieldMatrix(d, {{1, 0}, {0, 1}}), &stats);
    EXPECT_EQ(stats.systems, 2u);
    EXPECT_GT(stats.row_operations, 0u);
    EXPECT_GT(stats.field_operations, stats.row_operations);
    try {
        (void)solve_all(FieldMatrix(d, 2, 2), FieldMatrix(d, 3, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Rank, Examples) {
    const PrimeModulus d(3);
    EXPECT_EQ(rank(FieldMatrix(d, 3, 3)), 0u);
    EXPECT_EQ(rank(FieldMatrix::identity(d, 4)), 4u);
    EXPECT_EQ(rank(FieldMatrix(d, {{1, 2}, {2, 1}})), 1u);
    EXPECT_EQ(rank(FieldMatrix(PrimeModulus(5), {{1, 2}, {2, 1}})), 2u);
}
