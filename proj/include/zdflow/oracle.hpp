#pragma once

// Brute-force ground truth for flow existence, minimal depth and maximally
// delayed layers on desk-sized instances. Shares no solving code with the finder.

#include "zdflow/flow.hpp"
#include "zdflow/graph.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace zdflow {

struct OracleLimits {
    std::size_t max_vertices = 6;
    Zd max_modulus = 5;
};

struct OracleReport {
    bool exists = false;
    std::optional<std::size_t> min_depth;
    std::optional<std::vector<VertexSet>> delayed_layers;
    std::optional<ZdFlow> witness;
};

/// Layer recursion in closed form: layer 0 is the outputs plus isolated
/// vertices; layer k collects every remaining u admitting c in Z_d^V with
/// (c_u, (Gc)_u) = lambda(u), c_v = (Gc)_v = 0 off the placed set and u, and
/// c = 0 on inputs. Existence of c is decided by enumerating every value of
/// the free coordinates. Returns nullopt when a round comes up empty.
/// Throws InstanceTooLarge beyond `limits`.
[[nodiscard]] std::optional<std::vector<VertexSet>> brute_delayed_layers(const LabelledOpenGraph& g,
                                                                         OracleLimits limits = {});

/// Enumerates every ordered partition of V and, per partition, searches the
/// columns of C independently over all admissible values. Reports existence,
/// the minimal depth and a witness of that depth (first in lexicographic
/// enumeration order).
[[nodiscard]] OracleReport brute_min_depth(const LabelledOpenGraph& g, OracleLimits limits = {});

/// Both oracles in one report.
[[nodiscard]] OracleReport run_oracle(const LabelledOpenGraph& g, OracleLimits limits = {});

} // namespace zdflow
