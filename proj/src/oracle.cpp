#include "zdflow/oracle.hpp"

#include "zdflow/error.hpp"

#include <algorithm>
#include <string>

namespace zdflow {

namespace {

void check_limits(const LabelledOpenGraph& lg, const OracleLimits& limits) {
    const auto& g = lg.graph();
    if (g.size() > limits.max_vertices || g.modulus().value() > limits.max_modulus) {
        throw Error(ErrorCode::InstanceTooLarge, "oracle limited to |V| <= " + std::to_string(limits.max_vertices) +
                                                     " and d <= " + std::to_string(limits.max_modulus));
    }
    if (!lg.is_total()) {
        throw Error(ErrorCode::MissingLabel, "oracle needs a total labelling");
    }
}

/// Steps `digits` through Z_d^k in lexicographic order; false after the last value.
bool next_assignment(std::vector<Zd>& digits, Zd d) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < d) {
            return true;
        }
        digits[i] = 0;
    }
    return false;
}

/// Searches c supported on `free_rows` plus c_u = a such that (Gc)_u = b and
/// (Gc)_w = 0 for every w in `must_vanish`.
std::optional<FieldVector> enumerate_column(const OpenGraph& g, VertexId u, PauliLabel label,
                                            const VertexSet& free_rows, const VertexSet& must_vanish) {
    if (g.is_input(u) && label.a != 0) {
        return std::nullopt;
    }
    const auto& f = g.modulus();
    std::vector<Zd> digits(free_rows.size(), 0);
    FieldVector c(g.size(), 0);
    do {
        std::fill(c.begin(), c.end(), 0);
        c[u] = label.a;
        for (std::size_t i = 0; i < free_rows.size(); ++i) {
            c[free_rows[i]] = digits[i];
        }
        const auto gc_entry = [&](VertexId w) {
            Zd acc = 0;
            for (VertexId j = 0; j < g.size(); ++j) {
                acc = f.add(acc, f.mul(g.weight(w, j), c[j]));
            }
            return acc;
        };
        if (gc_entry(u) != label.b) {
            continue;
        }
        bool ok = true;
        for (const auto w : must_vanish) {
            if (gc_entry(w) != 0) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return c;
        }
    } while (next_assignment(digits, f.value()));
    return std::nullopt;
}

/// Assigns each vertex a block in [0, blocks) hitting every block; lexicographic.
bool next_surjection(std::vector<std::size_t>& block, std::size_t blocks) {
    const std::size_t n = block.size();
    while (true) {
        std::size_t i = n;
        while (i-- > 0) {
            if (++block[i] < blocks) {
                break;
            }
            block[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) {
            return false;
        }
        std::vector<bool> hit(blocks, false);
        for (const auto b : block) {
            hit[b] = true;
        }
        if (std::all_of(hit.begin(), hit.end(), [](bool h) { return h; })) {
            return true;
        }
    }
}

bool is_surjective(const std::vector<std::size_t>& block, std::size_t blocks) {
    std::vector<bool> hit(blocks, false);
    for (const auto b : block) {
        hit[b] = true;
    }
    return std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
}

/// Finds C for a fixed ordered partition, column by column.
std::optional<FieldMatrix> flow_for_partition(const LabelledOpenGraph& lg, const std::vector<std::size_t>& block) {
    const auto& g = lg.graph();
    FieldMatrix c(g.modulus(), g.size(), g.size());
    for (const auto v : g.non_outputs()) {
        VertexSet free_rows;
        VertexSet must_vanish;
        for (VertexId j = 0; j < g.size(); ++j) {
            if (j == v) {
                continue;
            }
            if (block[j] < block[v]) {
                if (!g.is_input(j)) {
                    free_rows.push_back(j);
                }
            } else {
                must_vanish.push_back(j);
            }
        }
        const auto column = enumerate_column(g, v, lg.label(v), free_rows, must_vanish);
        if (!column) {
            return std::nullopt;
        }
        c.set_column(v, *column);
    }
    return c;
}

} // namespace

std::optional<std::vector<VertexSet>> brute_delayed_layers(const LabelledOpenGraph& lg, OracleLimits limits) {
    check_limits(lg, limits);
    const auto& g = lg.graph();
    const VertexSet all = g.all();

    VertexSet first = g.outputs();
    for (const auto u : isolated_vertices(g)) {
        if (g.is_output(u)) {
            continue;
        }
        const VertexSet rest = set_difference(all, {u});
        if (!enumerate_column(g, u, lg.label(u), {}, rest)) {
            return std::nullopt;
        }
        first.push_back(u);
    }
    std::vector<VertexSet> layers{make_vertex_set(std::move(first))};
    VertexSet placed = layers.front();

    while (placed.size() < all.size()) {
        const VertexSet remaining = set_difference(all, placed);
        const VertexSet free_rows = set_difference(placed, g.inputs());
        VertexSet layer;
        for (const auto u : remaining) {
            const VertexSet must_vanish = set_difference(remaining, {u});
            if (enumerate_column(g, u, lg.label(u), free_rows, must_vanish)) {
                layer.push_back(u);
            }
        }
        if (layer.empty()) {
            return std::nullopt;
        }
        placed = set_union(placed, layer);
        layers.push_back(std::move(layer));
    }
    return layers;
}

OracleReport brute_min_depth(const LabelledOpenGraph& lg, OracleLimits limits) {
    check_limits(lg, limits);
    const auto& g = lg.graph();
    const std::size_t n = g.size();
    OracleReport report;
    for (std::size_t blocks = 1; blocks <= n; ++blocks) {
        std::vector<std::size_t> block(n, 0);
        bool more = is_surjective(block, blocks) || next_surjection(block, blocks);
        for (; more; more = next_surjection(block, blocks)) {
            auto c = flow_for_partition(lg, block);
            if (!c) {
                continue;
            }
            std::vector<VertexSet> layers(blocks);
            for (VertexId v = 0; v < n; ++v) {
                layers[block[v]].push_back(v);
            }
            report.exists = true;
            report.min_depth = blocks - 1;
            report.witness = ZdFlow{std::move(*c), std::move(layers)};
            return report;
        }
    }
    return report;
}

OracleReport run_oracle(const LabelledOpenGraph& g, OracleLimits limits) {
    auto report = brute_min_depth(g, limits);
    report.delayed_layers = brute_delayed_layers(g, limits);
    return report;
}

} // namespace zdflow
