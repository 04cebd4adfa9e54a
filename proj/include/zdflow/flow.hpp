#pragma once

// Z_d-flows: validity conditions, correction synthesis and the layer order theory.

#include "zdflow/gfp.hpp"
#include "zdflow/graph.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace zdflow {

/// Correction matrix C plus an ordered layer partition. `layers[0]` is the
/// last-measured layer (it holds the outputs), `layers.back()` is measured first.
struct ZdFlow {
    FieldMatrix correction;
    std::vector<VertexSet> layers;

    friend bool operator==(const ZdFlow&, const ZdFlow&) = default;
};

enum class FlowCondition {
    None,
    Partition,    // layers do not partition V
    LabelMatch,   // (i)   lambda(u) = (C_uu, (GC)_uu) on O^c
    InputOutput,  // (ii)  C[I,V] = 0 and C[V,O] = 0
    Layering,     // (iii) diagonal within a layer, zero towards earlier layers
};

struct FlowValidity {
    bool valid = true;
    FlowCondition violated = FlowCondition::None;
    /// (row, column) of the first offending entry, or (u, u) for condition (i).
    std::optional<std::pair<VertexId, VertexId>> witness;
    std::string message;

    explicit operator bool() const noexcept { return valid; }
};

/// Checks the partition, then (i), (ii) and (iii) in that order with a
/// row-major scan, reporting the first violation. Throws DimensionMismatch
/// when C is not |V|x|V| and MissingLabel when a non-output is unlabelled.
[[nodiscard]] FlowValidity validate_flow(const LabelledOpenGraph& g, const ZdFlow& flow);

/// x(v) and z(v) for every measured vertex v.
struct CorrectionSets {
    std::map<VertexId, Multiset> x;
    std::map<VertexId, Multiset> z;

    friend bool operator==(const CorrectionSets&, const CorrectionSets&) = default;
};

/// x(v) = C[:,v] - lambda(v).a 1_v, z(v) = (GC)[:,v] - lambda(v).b 1_v.
/// Throws InvalidFlow when the flow does not validate.
[[nodiscard]] CorrectionSets corrections(const LabelledOpenGraph& g, const ZdFlow& flow);

/// Strict order on measured vertices. A pair (u, v) means u receives a
/// correction conditioned on v's outcome, so v has to be measured before u.
struct PartialOrder {
    std::set<std::pair<VertexId, VertexId>> pairs;

    [[nodiscard]] bool relates(VertexId u, VertexId v) const { return pairs.contains({u, v}); }
};

/// Transitive closure of {(u, v) | x(v)_u != 0 or z(v)_u != 0, u != v, u
/// measured}. Throws CyclicDependency when the closure is not irreflexive.
[[nodiscard]] PartialOrder induced_order(const CorrectionSets& c);

/// `order` lists every vertex once, first-measured first. Passes iff (i) and
/// (ii) hold and C, GC are lower triangular once rows and columns are
/// permuted into that order.
[[nodiscard]] bool check_triangular_form(const LabelledOpenGraph& g, const FieldMatrix& c,
                                         const std::vector<VertexId>& order);

[[nodiscard]] std::size_t depth(const ZdFlow& flow);
/// Lambda_k; throws IndexOutOfRange for k > depth.
[[nodiscard]] const VertexSet& layer_at(const ZdFlow& flow, std::size_t k);
/// Layer index of every vertex (SIZE_MAX for vertices in no layer).
[[nodiscard]] std::vector<std::size_t> layer_index(const ZdFlow& flow, std::size_t vertex_count);
/// Non-outputs in execution order: deepest layer first, canonical order within a layer.
[[nodiscard]] std::vector<VertexId> measurement_order(const LabelledOpenGraph& g, const ZdFlow& flow);

enum class DelayComparison { More, NotMore, Incomparable };

/// Compares cumulative prefix sizes |Lambda_0 u ... u Lambda_k| against Phi's.
/// Throws PartitionMismatch when the two do not partition the same set.
[[nodiscard]] DelayComparison is_more_delayed(const std::vector<VertexSet>& lambda,
                                              const std::vector<VertexSet>& phi);

[[nodiscard]] std::string to_string(FlowCondition c);
[[nodiscard]] std::string to_string(DelayComparison c);

} // namespace zdflow
