#pragma once

// Polynomial-time search for maximally delayed (hence minimal-depth) Z_d-flows.

#include "zdflow/flow.hpp"
#include "zdflow/gfp.hpp"
#include "zdflow/graph.hpp"

#include <cstdint>
#include <optional>

namespace zdflow {

enum class SolveMode {
    /// One echelon reduction per round for all candidate vertices.
    Batched,
    /// One reduction per candidate vertex; debugging aid, same output.
    PerVertex,
};

struct FinderOptions {
    SolveMode mode = SolveMode::Batched;
};

struct FinderStats {
    std::size_t layers = 0;
    std::size_t rounds = 0;
    std::uint64_t systems_solved = 0;
    EliminationStats elimination;
};

struct FinderResult {
    std::optional<ZdFlow> flow;
    /// On failure, the vertices that could not be placed in any layer.
    VertexSet stuck;
    FinderStats stats;

    [[nodiscard]] bool found() const noexcept { return flow.has_value(); }
};

/// Builds layers from the outputs backwards. Layer 0 holds the outputs and
/// the isolated vertices whose label can be realised; each later round puts
/// every remaining vertex v whose system
///     G[R, O\I] c = b 1_v - a G[R, v]
/// (R = unplaced vertices, O = placed vertices) is solvable into the next
/// layer, with C[O\I, v] = c and C_vv = a. Input vertices need a = 0 since
/// C must vanish on input rows.
[[nodiscard]] FinderResult find_flow(const LabelledOpenGraph& g, FinderOptions options = {});

struct AnyLabellingResult {
    FinderResult result;
    /// `fixed` completed with the labels chosen for the flow (unchanged on failure).
    Labelling labels;
};

/// Same search, treating unlabelled non-outputs as unknowns. Labels are only
/// meaningful up to a nonzero scalar, so an unlabelled vertex first tries
/// a = 1 with b free, then b = 1 with a free; inputs can only take (0, 1).
[[nodiscard]] AnyLabellingResult find_flow_any_labelling(const OpenGraph& g, const Labelling& fixed,
                                                         FinderOptions options = {});

} // namespace zdflow
