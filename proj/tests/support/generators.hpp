#pragma once

// Seeded generators for random graphs, flows and patterns shared by the unit
// tests and the acceptance suite.

#include "zdflow/finder.hpp"
#include "zdflow/graph.hpp"
#include "zdflow/pattern.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace zdflow::gen {

struct GraphShape {
    std::size_t min_vertices = 1;
    std::size_t max_vertices = 5;
    Zd d = 3;
    double edge_probability = 0.5;
    double input_probability = 0.3;
    double output_probability = 0.4;
    /// Cap on |I|; the simulator register grows with 2|I| reference qudits.
    std::size_t max_inputs = 8;
    std::optional<std::size_t> max_measured;
};

std::vector<std::string> numbered_names(std::size_t n);

LabelledOpenGraph random_labelled_graph(std::mt19937_64& rng, const GraphShape& shape);

/// Dense graph with uniformly random nonzero weights, I = ∅ and the first
/// half of the vertices as outputs.
LabelledOpenGraph random_dense_graph(std::mt19937_64& rng, std::size_t n, Zd d);

struct FlowInstance {
    LabelledOpenGraph graph;
    ZdFlow flow;
};

/// Redraws until the finder succeeds (and the graph has an edge when
/// `require_edge` is set). Gives up after `attempts` draws.
std::optional<FlowInstance> random_flow_instance(std::mt19937_64& rng, const GraphShape& shape,
                                                 bool require_edge = false, std::size_t attempts = 10000);

/// Calls `visit` once per labelled open graph on n vertices over Z_d, up to
/// relabelling of the vertices. Returns the number visited.
std::size_t for_each_labelled_graph(std::size_t n, Zd d, const std::function<void(const LabelledOpenGraph&)>& visit);

/// Random runnable pattern with at most `max_qudits` qudits and
/// `max_commands` commands; every measurement carries random angles.
Pattern random_runnable_pattern(std::mt19937_64& rng, Zd d, std::size_t max_qudits, std::size_t max_commands);

/// Every totalisation of the flow's layer order (up to `limit` of them),
/// each listing the non-outputs first-measured first.
std::vector<std::vector<VertexId>> layer_totalisations(const LabelledOpenGraph& g, const ZdFlow& flow,
                                                       std::size_t limit);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace zdflow::gen
