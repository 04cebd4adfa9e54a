#include "zdflow/finder.hpp"

#include "zdflow/error.hpp"

#include <algorithm>
#include <utility>

namespace zdflow {

namespace {

struct Placement {
    VertexId vertex;
    FieldVector correction; // indexed like the current O\I list
    PauliLabel label;
};

class FlowSearch {
public:
    FlowSearch(const OpenGraph& g, Labelling labels, FinderOptions options)
        : g_(g), f_(g.modulus()), labels_(std::move(labels)), options_(options),
          correction_(g.modulus(), g.size(), g.size()) {}

    FinderResult run() {
        VertexSet placed = g_.outputs();
        VertexSet last_layer = g_.outputs();
        for (const auto u : isolated_vertices(g_)) {
            if (g_.is_output(u) || g_.is_input(u)) {
                continue;
            }
            auto& label = labels_[u];
            if (!label.has_value()) {
                label = PauliLabel{1, 0};
            }
            // (GC)_uu = 0 for an isolated u, so only b = 0 labels are realisable.
            if (label->b == 0) {
                correction_.set(u, u, label->a);
                last_layer.push_back(u);
            }
        }
        last_layer = make_vertex_set(std::move(last_layer));
        placed = set_union(placed, last_layer);
        layers_.push_back(last_layer);

        while (true) {
            const VertexSet remaining = set_difference(g_.all(), placed);
            if (remaining.empty()) {
                break;
            }
            ++stats_.rounds;
            const VertexSet columns = set_difference(placed, g_.inputs());
            const auto found = solve_round(remaining, columns);
            if (found.empty()) {
                FinderResult out;
                out.stuck = remaining;
                out.stats = finish_stats();
                return out;
            }
            VertexSet layer;
            for (const auto& p : found) {
                for (std::size_t i = 0; i < columns.size(); ++i) {
                    correction_.set(columns[i], p.vertex, p.correction[i]);
                }
                correction_.set(p.vertex, p.vertex, p.label.a);
                labels_[p.vertex] = p.label;
                layer.push_back(p.vertex);
            }
            layer = make_vertex_set(std::move(layer));
            placed = set_union(placed, layer);
            layers_.push_back(std::move(layer));
        }
        FinderResult out;
        out.flow = ZdFlow{correction_, layers_};
        out.stats = finish_stats();
        return out;
    }

    [[nodiscard]] const Labelling& labels() const noexcept { return labels_; }

private:
    FinderStats finish_stats() {
        stats_.layers = layers_.size();
        stats_.systems_solved = stats_.elimination.systems;
        return stats_;
    }

    /// Right-hand side b 1_v - a G[R, v] over the rows `remaining`.
    [[nodiscard]] FieldVector rhs(const VertexSet& remaining, VertexId v, PauliLabel label) const {
        FieldVector out(remaining.size(), 0);
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            const VertexId r = remaining[i];
            Zd value = f_.neg(f_.mul(label.a, g_.weight(r, v)));
            if (r == v) {
                value = f_.add(value, label.b);
            }
            out[i] = value;
        }
        return out;
    }

    std::vector<Placement> solve_round(const VertexSet& remaining, const VertexSet& columns) {
        const FieldMatrix system = submatrix(g_.adjacency(), remaining, columns);
        std::vector<Placement> found;

        std::vector<VertexId> fixed;
        for (const auto v : remaining) {
            const auto& label = labels_[v];
            if (!label.has_value()) {
                continue;
            }
            if (g_.is_input(v) && label->a != 0) {
                continue;
            }
            fixed.push_back(v);
        }

        const auto accept = [&](VertexId v, const SolveOutcome& outcome) {
            if (outcome.solvable) {
                found.push_back({v, outcome.solution, *labels_[v]});
            }
        };
        if (options_.mode == SolveMode::Batched && !fixed.empty()) {
            FieldMatrix rhs_block(f_, remaining.size(), fixed.size());
            for (std::size_t j = 0; j < fixed.size(); ++j) {
                rhs_block.set_column(j, rhs(remaining, fixed[j], *labels_[fixed[j]]));
            }
            const auto outcomes = solve_all(system, rhs_block, &stats_.elimination);
            for (std::size_t j = 0; j < fixed.size(); ++j) {
                accept(fixed[j], outcomes[j]);
            }
        } else {
            for (const auto v : fixed) {
                const auto b = FieldMatrix::from_column(f_, rhs(remaining, v, *labels_[v]));
                accept(v, solve_all(system, b, &stats_.elimination).front());
            }
        }

        for (const auto v : remaining) {
            if (!labels_[v].has_value()) {
                if (auto p = solve_free_label(remaining, columns, system, v)) {
                    found.push_back(std::move(*p));
                }
            }
        }
        std::sort(found.begin(), found.end(), [](const auto& l, const auto& r) { return l.vertex < r.vertex; });
        return found;
    }

    /// Unlabelled v: a = 1 with b unknown (non-inputs), else b = 1 with a
    /// unknown (a forced to 0 on inputs).
    std::optional<Placement> solve_free_label(const VertexSet& remaining, const VertexSet& columns,
                                              const FieldMatrix& system, VertexId v) {
        if (!g_.is_input(v)) {
            // Row v is absorbed by b, so drop it: G[R\v, O\I] c = -G[R\v, v].
            const VertexSet rows = set_difference(remaining, {v});
            const FieldMatrix reduced = submatrix(g_.adjacency(), rows, columns);
            FieldVector target(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                target[i] = f_.neg(g_.weight(rows[i], v));
            }
            const auto outcome =
                solve_all(reduced, FieldMatrix::from_column(f_, target), &stats_.elimination).front();
            if (outcome.solvable) {
                Zd b = 0;
                for (std::size_t i = 0; i < columns.size(); ++i) {
                    b = f_.add(b, f_.mul(g_.weight(v, columns[i]), outcome.solution[i]));
                }
                return Placement{v, outcome.solution, PauliLabel{1, b}};
            }
        }

        FieldVector unit(remaining.size(), 0);
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            unit[i] = remaining[i] == v ? 1 : 0;
        }
        if (g_.is_input(v)) {
            const auto outcome = solve_all(system, FieldMatrix::from_column(f_, unit), &stats_.elimination).front();
            if (!outcome.solvable) {
                return std::nullopt;
            }
            return Placement{v, outcome.solution, PauliLabel{0, 1}};
        }
        // [G[R, O\I] | G[R, v]] (c, a) = 1_v
        FieldMatrix extended(f_, remaining.size(), columns.size() + 1);
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            for (std::size_t j = 0; j < columns.size(); ++j) {
                extended.set(i, j, system(i, j));
            }
            extended.set(i, columns.size(), g_.weight(remaining[i], v));
        }
        const auto outcome = solve_all(extended, FieldMatrix::from_column(f_, unit), &stats_.elimination).front();
        if (!outcome.solvable) {
            return std::nullopt;
        }
        FieldVector c(outcome.solution.begin(), outcome.solution.end() - 1);
        return Placement{v, std::move(c), PauliLabel{outcome.solution.back(), 1}};
    }

    const OpenGraph& g_;
    PrimeModulus f_;
    Labelling labels_;
    FinderOptions options_;
    FieldMatrix correction_;
    std::vector<VertexSet> layers_;
    FinderStats stats_;
};

} // namespace

FinderResult find_flow(const LabelledOpenGraph& g, FinderOptions options) {
    if (!g.is_total()) {
        for (const auto v : g.graph().non_outputs()) {
            (void)g.label(v);
        }
    }
    FlowSearch search(g.graph(), g.labels(), options);
    return search.run();
}

AnyLabellingResult find_flow_any_labelling(const OpenGraph& g, const Labelling& fixed, FinderOptions options) {
    // Validates the partial labelling.
    const LabelledOpenGraph checked(g, fixed, false);
    FlowSearch search(g, fixed, options);
    AnyLabellingResult out{search.run(), fixed};
    if (out.result.found()) {
        out.labels = search.labels();
    }
    return out;
}

} // namespace zdflow
