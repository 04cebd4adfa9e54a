#include "zdflow/flow.hpp"

#include "zdflow/error.hpp"

#include <algorithm>
#include <limits>

namespace zdflow {

namespace {

constexpr std::size_t kNoLayer = std::numeric_limits<std::size_t>::max();

FlowValidity violation(FlowCondition c, VertexId u, VertexId v, std::string message) {
    return {false, c, std::make_pair(u, v), std::move(message)};
}

std::string entry(const OpenGraph& g, VertexId u, VertexId v) {
    return "(" + g.name(u) + "," + g.name(v) + ")";
}

} // namespace

std::vector<std::size_t> layer_index(const ZdFlow& flow, std::size_t vertex_count) {
    std::vector<std::size_t> out(vertex_count, kNoLayer);
    for (std::size_t k = 0; k < flow.layers.size(); ++k) {
        for (const auto v : flow.layers[k]) {
            if (v < vertex_count) {
                out[v] = k;
            }
        }
    }
    return out;
}

FlowValidity validate_flow(const LabelledOpenGraph& lg, const ZdFlow& flow) {
    const auto& g = lg.graph();
    const std::size_t n = g.size();
    const auto& c = flow.correction;
    if (c.rows() != n || c.cols() != n || !(c.modulus() == g.modulus())) {
        throw Error(ErrorCode::DimensionMismatch, "correction matrix must be |V|x|V| over the graph's field");
    }

    std::vector<std::size_t> seen(n, 0);
    for (const auto& layer : flow.layers) {
        if (layer.empty()) {
            return {false, FlowCondition::Partition, std::nullopt, "empty layer"};
        }
        for (const auto v : layer) {
            if (v >= n) {
                throw Error(ErrorCode::UnknownVertex, "layer mentions vertex " + std::to_string(v));
            }
            ++seen[v];
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        if (seen[v] != 1) {
            return {false, FlowCondition::Partition, std::make_pair(v, v),
                    "vertex '" + g.name(v) + "' appears in " + std::to_string(seen[v]) + " layers"};
        }
    }

    const FieldMatrix gc = mat_mul(g.adjacency(), c);

    for (const auto u : g.non_outputs()) {
        const auto label = lg.label(u);
        if (c(u, u) != label.a || gc(u, u) != label.b) {
            return violation(FlowCondition::LabelMatch, u, u,
                             "label of '" + g.name(u) + "' is (" + std::to_string(label.a) + "," +
                                 std::to_string(label.b) + ") but (C,GC) diagonal is (" + std::to_string(c(u, u)) +
                                 "," + std::to_string(gc(u, u)) + ")");
        }
    }

    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v = 0; v < n; ++v) {
            if (c(u, v) != 0 && (g.is_input(u) || g.is_output(v))) {
                return violation(FlowCondition::InputOutput, u, v,
                                 "C" + entry(g, u, v) + " must vanish on input rows and output columns");
            }
        }
    }

    const auto layer_of = layer_index(flow, n);
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v = 0; v < n; ++v) {
            const bool same_layer = layer_of[u] == layer_of[v] && u != v;
            const bool row_measured_earlier = layer_of[u] > layer_of[v];
            if (!same_layer && !row_measured_earlier) {
                continue;
            }
            if (c(u, v) != 0) {
                return violation(FlowCondition::Layering, u, v, "C" + entry(g, u, v) + " must vanish");
            }
            if (gc(u, v) != 0) {
                return violation(FlowCondition::Layering, u, v, "(GC)" + entry(g, u, v) + " must vanish");
            }
        }
    }
    return {};
}

CorrectionSets corrections(const LabelledOpenGraph& lg, const ZdFlow& flow) {
    if (const auto report = validate_flow(lg, flow); !report.valid) {
        throw Error(ErrorCode::InvalidFlow, report.message);
    }
    const auto& g = lg.graph();
    const auto& f = g.modulus();
    const FieldMatrix gc = mat_mul(g.adjacency(), flow.correction);
    CorrectionSets out;
    for (const auto v : g.non_outputs()) {
        const auto label = lg.label(v);
        auto x = flow.correction.column(v);
        auto z = gc.column(v);
        x[v] = f.sub(x[v], label.a);
        z[v] = f.sub(z[v], label.b);
        out.x.emplace(v, std::move(x));
        out.z.emplace(v, std::move(z));
    }
    return out;
}

PartialOrder induced_order(const CorrectionSets& cs) {
    std::vector<VertexId> domain;
    for (const auto& [v, _] : cs.x) {
        domain.push_back(v);
    }
    for (const auto& [v, _] : cs.z) {
        domain.push_back(v);
    }
    domain = make_vertex_set(std::move(domain));
    const std::size_t m = domain.size();
    const auto position = [&](VertexId v) {
        return static_cast<std::size_t>(std::lower_bound(domain.begin(), domain.end(), v) - domain.begin());
    };

    std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
    const auto add_generators = [&](const std::map<VertexId, Multiset>& sets) {
        for (const auto& [v, multiset] : sets) {
            for (const auto u : domain) {
                if (u != v && u < multiset.size() && multiset[u] != 0) {
                    reach[position(u)][position(v)] = true;
                }
            }
        }
    };
    add_generators(cs.x);
    add_generators(cs.z);

    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!reach[i][k]) {
                continue;
            }
            for (std::size_t j = 0; j < m; ++j) {
                if (reach[k][j]) {
                    reach[i][j] = true;
                }
            }
        }
    }

    PartialOrder out;
    for (std::size_t i = 0; i < m; ++i) {
        if (reach[i][i]) {
            throw Error(ErrorCode::CyclicDependency,
                        "corrections of vertex " + std::to_string(domain[i]) + " depend on itself");
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (reach[i][j]) {
                out.pairs.emplace(domain[i], domain[j]);
            }
        }
    }
    return out;
}

bool check_triangular_form(const LabelledOpenGraph& lg, const FieldMatrix& c, const std::vector<VertexId>& order) {
    const auto& g = lg.graph();
    const std::size_t n = g.size();
    if (c.rows() != n || c.cols() != n || order.size() != n) {
        return false;
    }
    std::vector<std::size_t> position(n, kNoLayer);
    for (std::size_t i = 0; i < n; ++i) {
        if (order[i] >= n || position[order[i]] != kNoLayer) {
            return false;
        }
        position[order[i]] = i;
    }
    const FieldMatrix gc = mat_mul(g.adjacency(), c);
    for (const auto u : g.non_outputs()) {
        if (!lg.labels()[u].has_value()) {
            return false;
        }
        const auto label = *lg.labels()[u];
        if (c(u, u) != label.a || gc(u, u) != label.b) {
            return false;
        }
    }
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v = 0; v < n; ++v) {
            if (c(u, v) != 0 && (g.is_input(u) || g.is_output(v))) {
                return false;
            }
            if (position[u] < position[v] && (c(u, v) != 0 || gc(u, v) != 0)) {
                return false;
            }
        }
    }
    return true;
}

std::size_t depth(const ZdFlow& flow) { return flow.layers.empty() ? 0 : flow.layers.size() - 1; }

const VertexSet& layer_at(const ZdFlow& flow, std::size_t k) {
    if (k >= flow.layers.size()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "layer " + std::to_string(k) + " requested, depth is " + std::to_string(depth(flow)));
    }
    return flow.layers[k];
}

std::vector<VertexId> measurement_order(const LabelledOpenGraph& lg, const ZdFlow& flow) {
    std::vector<VertexId> out;
    for (auto it = flow.layers.rbegin(); it != flow.layers.rend(); ++it) {
        for (const auto v : *it) {
            if (!lg.graph().is_output(v)) {
                out.push_back(v);
            }
        }
    }
    return out;
}

DelayComparison is_more_delayed(const std::vector<VertexSet>& lambda, const std::vector<VertexSet>& phi) {
    const auto flatten = [](const std::vector<VertexSet>& partition) {
        std::vector<VertexId> all;
        for (const auto& layer : partition) {
            all.insert(all.end(), layer.begin(), layer.end());
        }
        std::sort(all.begin(), all.end());
        return all;
    };
    const auto lhs = flatten(lambda);
    const auto rhs = flatten(phi);
    if (lhs != rhs || std::adjacent_find(lhs.begin(), lhs.end()) != lhs.end()) {
        throw Error(ErrorCode::PartitionMismatch, "layer decompositions do not partition the same vertex set");
    }
    bool strictly_more = false;
    bool strictly_less = false;
    std::size_t lambda_prefix = 0;
    std::size_t phi_prefix = 0;
    for (std::size_t k = 0; k < std::max(lambda.size(), phi.size()); ++k) {
        lambda_prefix += k < lambda.size() ? lambda[k].size() : 0;
        phi_prefix += k < phi.size() ? phi[k].size() : 0;
        strictly_more |= lambda_prefix > phi_prefix;
        strictly_less |= lambda_prefix < phi_prefix;
    }
    if (strictly_more && strictly_less) {
        return DelayComparison::Incomparable;
    }
    return strictly_more ? DelayComparison::More : DelayComparison::NotMore;
}

std::string to_string(FlowCondition c) {
    switch (c) {
    case FlowCondition::None: return "none";
    case FlowCondition::Partition: return "partition";
    case FlowCondition::LabelMatch: return "(i) label";
    case FlowCondition::InputOutput: return "(ii) input/output";
    case FlowCondition::Layering: return "(iii) layering";
    }
    return "unknown";
}

std::string to_string(DelayComparison c) {
    switch (c) {
    case DelayComparison::More: return "more";
    case DelayComparison::NotMore: return "not-more";
    case DelayComparison::Incomparable: return "incomparable";
    }
    return "unknown";
}

} // namespace zdflow
