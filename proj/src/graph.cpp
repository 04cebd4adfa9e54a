#include "zdflow/graph.hpp"

#include "zdflow/error.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <map>
#include <set>
#include <utility>

namespace zdflow {

namespace {

bool all_digits(std::string_view s) noexcept {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::string_view strip_zeros(std::string_view s) noexcept {
    const auto first = s.find_first_not_of('0');
    return first == std::string_view::npos ? std::string_view{"0"} : s.substr(first);
}

} // namespace

bool canonical_less(std::string_view lhs, std::string_view rhs) noexcept {
    const bool ln = all_digits(lhs);
    const bool rn = all_digits(rhs);
    if (ln != rn) {
        return ln;
    }
    if (ln) {
        const auto a = strip_zeros(lhs);
        const auto b = strip_zeros(rhs);
        if (a.size() != b.size()) {
            return a.size() < b.size();
        }
        if (a != b) {
            return a < b;
        }
    }
    return lhs < rhs;
}

VertexSet make_vertex_set(std::vector<VertexId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

bool contains(const VertexSet& set, VertexId v) noexcept {
    return std::binary_search(set.begin(), set.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

OpenGraph::OpenGraph(PrimeModulus modulus, std::vector<std::string> vertices, const std::vector<Edge>& edges,
                     const std::vector<std::string>& inputs, const std::vector<std::string>& outputs)
    : names_(std::move(vertices)), adjacency_(modulus, names_.size(), names_.size()) {
    std::sort(names_.begin(), names_.end(), [](const auto& a, const auto& b) { return canonical_less(a, b); });
    if (std::adjacent_find(names_.begin(), names_.end()) != names_.end()) {
        throw Error(ErrorCode::MalformedGraph, "duplicate vertex name");
    }
    adjacency_ = FieldMatrix(modulus, names_.size(), names_.size());
    std::set<std::pair<VertexId, VertexId>> seen;
    for (const auto& e : edges) {
        const VertexId u = id(e.u);
        const VertexId v = id(e.v);
        if (u == v) {
            throw Error(ErrorCode::MalformedGraph, "self loop on '" + e.u + "'");
        }
        if (e.weight < 0) {
            throw Error(ErrorCode::MalformedGraph, "negative edge weight on '" + e.u + "'-'" + e.v + "'");
        }
        if (!seen.emplace(std::min(u, v), std::max(u, v)).second) {
            throw Error(ErrorCode::MalformedGraph, "duplicate edge '" + e.u + "'-'" + e.v + "'");
        }
        adjacency_.set(u, v, e.weight);
        adjacency_.set(v, u, e.weight);
    }
    inputs_ = ids(inputs);
    outputs_ = ids(outputs);
    validate();
}

OpenGraph::OpenGraph(std::vector<std::string> names, FieldMatrix adjacency, VertexSet inputs, VertexSet outputs)
    : names_(std::move(names)), adjacency_(std::move(adjacency)), inputs_(make_vertex_set(std::move(inputs))),
      outputs_(make_vertex_set(std::move(outputs))) {
    if (!std::is_sorted(names_.begin(), names_.end(),
                        [](const auto& a, const auto& b) { return canonical_less(a, b); }) ||
        std::adjacent_find(names_.begin(), names_.end()) != names_.end()) {
        throw Error(ErrorCode::MalformedGraph, "vertex names must be unique and canonically sorted");
    }
    validate();
}

void OpenGraph::validate() const {
    const std::size_t n = names_.size();
    if (n == 0) {
        throw Error(ErrorCode::MalformedGraph, "graph has no vertices");
    }
    if (adjacency_.rows() != n || adjacency_.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "adjacency matrix does not match the vertex count");
    }
    if (!adjacency_.is_symmetric()) {
        throw Error(ErrorCode::MalformedGraph, "adjacency matrix is not symmetric");
    }
    for (VertexId v = 0; v < n; ++v) {
        if (adjacency_(v, v) != 0) {
            throw Error(ErrorCode::MalformedGraph, "loop on '" + names_[v] + "'");
        }
    }
    for (const auto* set : {&inputs_, &outputs_}) {
        if (!set->empty() && set->back() >= n) {
            throw Error(ErrorCode::UnknownVertex, "input/output id out of range");
        }
    }
}

VertexId OpenGraph::id(std::string_view name) const {
    const auto it = std::lower_bound(names_.begin(), names_.end(), name,
                                     [](const std::string& a, std::string_view b) { return canonical_less(a, b); });
    if (it == names_.end() || *it != name) {
        throw Error(ErrorCode::UnknownVertex, "no vertex named '" + std::string(name) + "'");
    }
    return static_cast<VertexId>(it - names_.begin());
}

VertexSet OpenGraph::ids(const std::vector<std::string>& names) const {
    std::vector<VertexId> out;
    out.reserve(names.size());
    for (const auto& n : names) {
        out.push_back(id(n));
    }
    return make_vertex_set(std::move(out));
}

std::vector<std::string> OpenGraph::names_of(const VertexSet& set) const {
    std::vector<std::string> out;
    out.reserve(set.size());
    for (const auto v : set) {
        out.push_back(name(v));
    }
    return out;
}

VertexSet OpenGraph::all() const {
    VertexSet out(size());
    for (VertexId v = 0; v < size(); ++v) {
        out[v] = v;
    }
    return out;
}

VertexSet OpenGraph::non_outputs() const { return set_difference(all(), outputs_); }

VertexSet OpenGraph::non_inputs() const { return set_difference(all(), inputs_); }

std::vector<std::tuple<VertexId, VertexId, Zd>> OpenGraph::edges() const {
    std::vector<std::tuple<VertexId, VertexId, Zd>> out;
    for (VertexId u = 0; u < size(); ++u) {
        for (VertexId v = u + 1; v < size(); ++v) {
            if (adjacency_(u, v) != 0) {
                out.emplace_back(u, v, adjacency_(u, v));
            }
        }
    }
    return out;
}

LabelledOpenGraph::LabelledOpenGraph(OpenGraph graph, Labelling labels, bool require_total)
    : graph_(std::move(graph)), labels_(std::move(labels)) {
    const auto d = graph_.modulus().value();
    if (labels_.size() != graph_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "labelling length does not match the vertex count");
    }
    for (VertexId v = 0; v < graph_.size(); ++v) {
        const auto& label = labels_[v];
        if (graph_.is_output(v)) {
            if (label.has_value()) {
                throw Error(ErrorCode::MalformedGraph, "output '" + graph_.name(v) + "' carries a label");
            }
            continue;
        }
        if (!label.has_value()) {
            if (require_total) {
                throw Error(ErrorCode::MissingLabel, "non-output '" + graph_.name(v) + "' has no label");
            }
            continue;
        }
        if (label->a >= d || label->b >= d) {
            throw Error(ErrorCode::MalformedGraph, "label of '" + graph_.name(v) + "' is not reduced mod d");
        }
        if (label->is_zero()) {
            throw Error(ErrorCode::ZeroLabel, "label of '" + graph_.name(v) + "' is (0,0)");
        }
    }
}

PauliLabel LabelledOpenGraph::label(VertexId v) const {
    if (v >= labels_.size() || !labels_[v].has_value()) {
        throw Error(ErrorCode::MissingLabel, "vertex " + std::to_string(v) + " has no label");
    }
    return *labels_[v];
}

bool LabelledOpenGraph::is_total() const noexcept {
    for (VertexId v = 0; v < graph_.size(); ++v) {
        if (!graph_.is_output(v) && !labels_[v].has_value()) {
            return false;
        }
    }
    return true;
}

FieldMatrix submatrix(const FieldMatrix& g, const VertexSet& rows, const VertexSet& cols) {
    FieldMatrix out(g.modulus(), rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= g.rows()) {
            throw Error(ErrorCode::UnknownVertex, "row vertex " + std::to_string(rows[i]) + " out of range");
        }
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j] >= g.cols()) {
                throw Error(ErrorCode::UnknownVertex, "column vertex " + std::to_string(cols[j]) + " out of range");
            }
            out.set(i, j, g(rows[i], cols[j]));
        }
    }
    return out;
}

Multiset indicator(const OpenGraph& g, const VertexSet& s) {
    Multiset out(g.size(), 0);
    for (const auto v : s) {
        if (v >= g.size()) {
            throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v) + " out of range");
        }
        out[v] = 1;
    }
    return out;
}

VertexSet isolated_vertices(const OpenGraph& g) {
    VertexSet out;
    for (VertexId u = 0; u < g.size(); ++u) {
        bool isolated = true;
        for (VertexId v = 0; v < g.size() && isolated; ++v) {
            isolated = g.weight(u, v) == 0;
        }
        if (isolated) {
            out.push_back(u);
        }
    }
    return out;
}

} // namespace zdflow
