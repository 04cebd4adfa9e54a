#pragma once

// Labelled open Z_d-graphs and the submatrix / multiset helpers built on them.

#include "zdflow/gfp.hpp"
#include "zdflow/pauli_label.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace zdflow {

/// Index into OpenGraph::names(); vertices are kept in canonical name order.
using VertexId = std::size_t;
/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<VertexId>;
/// A Z_d-multiset of vertices, i.e. a column vector in Z_d^V.
using Multiset = FieldVector;

/// Natural order on names: all-digit names first, compared numerically, then
/// everything else lexicographically.
[[nodiscard]] bool canonical_less(std::string_view lhs, std::string_view rhs) noexcept;

[[nodiscard]] VertexSet make_vertex_set(std::vector<VertexId> ids);
[[nodiscard]] bool contains(const VertexSet& set, VertexId v) noexcept;
[[nodiscard]] VertexSet set_union(const VertexSet& a, const VertexSet& b);
[[nodiscard]] VertexSet set_difference(const VertexSet& a, const VertexSet& b);

struct Edge {
    std::string u;
    std::string v;
    std::int64_t weight = 0;
};

/// Loop-free undirected Z_d-weighted graph with distinguished inputs and
/// outputs. Immutable after construction.
class OpenGraph {
public:
    /// Vertices are re-sorted canonically; duplicate edges, self loops,
    /// negative weights and unknown endpoints are rejected (MalformedGraph /
    /// UnknownVertex). Weights are reduced mod d.
    OpenGraph(PrimeModulus modulus, std::vector<std::string> vertices, const std::vector<Edge>& edges,
              const std::vector<std::string>& inputs, const std::vector<std::string>& outputs);

    /// Adjacency-matrix constructor; names must already be canonically sorted.
    OpenGraph(std::vector<std::string> names, FieldMatrix adjacency, VertexSet inputs, VertexSet outputs);

    [[nodiscard]] const PrimeModulus& modulus() const noexcept { return adjacency_.modulus(); }
    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const std::string& name(VertexId v) const { return names_.at(v); }
    /// Throws Error(UnknownVertex).
    [[nodiscard]] VertexId id(std::string_view name) const;
    [[nodiscard]] VertexSet ids(const std::vector<std::string>& names) const;
    [[nodiscard]] std::vector<std::string> names_of(const VertexSet& set) const;

    [[nodiscard]] const FieldMatrix& adjacency() const noexcept { return adjacency_; }
    [[nodiscard]] Zd weight(VertexId u, VertexId v) const { return adjacency_(u, v); }
    [[nodiscard]] const VertexSet& inputs() const noexcept { return inputs_; }
    [[nodiscard]] const VertexSet& outputs() const noexcept { return outputs_; }
    [[nodiscard]] bool is_input(VertexId v) const noexcept { return contains(inputs_, v); }
    [[nodiscard]] bool is_output(VertexId v) const noexcept { return contains(outputs_, v); }
    [[nodiscard]] VertexSet all() const;
    /// O^c, the measured vertices.
    [[nodiscard]] VertexSet non_outputs() const;
    /// I^c, the vertices prepared in |0:X>.
    [[nodiscard]] VertexSet non_inputs() const;
    /// Edges (u, v, weight) with u < v and nonzero weight.
    [[nodiscard]] std::vector<std::tuple<VertexId, VertexId, Zd>> edges() const;

    friend bool operator==(const OpenGraph&, const OpenGraph&) = default;

private:
    void validate() const;

    std::vector<std::string> names_;
    FieldMatrix adjacency_;
    VertexSet inputs_;
    VertexSet outputs_;
};

/// Labels indexed by vertex id; present exactly on O^c once complete.
using Labelling = std::vector<std::optional<PauliLabel>>;

class LabelledOpenGraph {
public:
    /// Checks that every label is nonzero, reduced mod d and sits on a
    /// non-output. With `require_total`, every non-output must be labelled
    /// (MissingLabel otherwise).
    LabelledOpenGraph(OpenGraph graph, Labelling labels, bool require_total = true);

    [[nodiscard]] const OpenGraph& graph() const noexcept { return graph_; }
    [[nodiscard]] const Labelling& labels() const noexcept { return labels_; }
    /// Throws Error(MissingLabel) when v is unlabelled.
    [[nodiscard]] PauliLabel label(VertexId v) const;
    [[nodiscard]] bool is_total() const noexcept;

    friend bool operator==(const LabelledOpenGraph&, const LabelledOpenGraph&) = default;

private:
    OpenGraph graph_;
    Labelling labels_;
};

/// G[rows, cols] in the order the sets are given. Throws UnknownVertex.
[[nodiscard]] FieldMatrix submatrix(const FieldMatrix& g, const VertexSet& rows, const VertexSet& cols);
/// 1_S as a column vector of length |V|.
[[nodiscard]] Multiset indicator(const OpenGraph& g, const VertexSet& s);
/// Vertices u with G_uv = 0 for every v.
[[nodiscard]] VertexSet isolated_vertices(const OpenGraph& g);

} // namespace zdflow
