#include "zdflow/pattern.hpp"

#include "zdflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace zdflow {

namespace {

enum class QuditPhase { Fresh, Live, Measured };

RunnableCheck fail(std::size_t index, std::string reason) { return {false, index, std::move(reason)}; }

std::tuple<VertexId, VertexId> edge_key(VertexId u, VertexId v) { return {std::min(u, v), std::max(u, v)}; }

} // namespace

std::string to_string(CommandKind k) {
    switch (k) {
    case CommandKind::N:
        return "N";
    case CommandKind::E:
        return "E";
    case CommandKind::M:
        return "M";
    case CommandKind::X:
        return "X";
    case CommandKind::Z:
        return "Z";
    }
    return "?";
}

RunnableCheck check_runnable(const Pattern& p) {
    const std::size_t n = p.names.size();
    std::vector<QuditPhase> phase(n, QuditPhase::Fresh);
    for (VertexId v : p.inputs) {
        if (v >= n) {
            return fail(0, "input id out of range");
        }
        phase[v] = QuditPhase::Live;
    }
    for (VertexId v : p.outputs) {
        if (v >= n) {
            return fail(0, "output id out of range");
        }
    }
    const auto live = [&](VertexId v) { return v < n && phase[v] == QuditPhase::Live; };
    for (std::size_t i = 0; i < p.commands.size(); ++i) {
        const Command& c = p.commands[i];
        if (c.u >= n || ((c.kind == CommandKind::E || c.kind == CommandKind::X || c.kind == CommandKind::Z) &&
                         c.v >= n)) {
            return fail(i, "command refers to an unknown vertex");
        }
        switch (c.kind) {
        case CommandKind::N:
            if (phase[c.u] != QuditPhase::Fresh || contains(p.inputs, c.u)) {
                return fail(i, "qudit " + p.names[c.u] + " initialised twice");
            }
            phase[c.u] = QuditPhase::Live;
            break;
        case CommandKind::E:
            if (c.u == c.v) {
                return fail(i, "entangler on a single qudit");
            }
            if (!live(c.u) || !live(c.v)) {
                return fail(i, "entangler on an uninitialised or measured qudit");
            }
            break;
        case CommandKind::M:
            if (c.label.is_zero()) {
                return fail(i, "measurement label (0,0)");
            }
            if (contains(p.outputs, c.u)) {
                return fail(i, "output " + p.names[c.u] + " is measured");
            }
            if (!live(c.u)) {
                return fail(i, "measurement of an uninitialised or measured qudit");
            }
            phase[c.u] = QuditPhase::Measured;
            break;
        case CommandKind::X:
        case CommandKind::Z:
            if (!live(c.u)) {
                return fail(i, "correction on an uninitialised or measured qudit");
            }
            if (phase[c.v] != QuditPhase::Measured) {
                return fail(i, "correction uses the outcome of " + p.names[c.v] + " before it is measured");
            }
            break;
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        if (phase[v] == QuditPhase::Fresh) {
            return fail(p.commands.size(), "qudit " + p.names[v] + " is never initialised");
        }
        if (!contains(p.outputs, v) && phase[v] != QuditPhase::Measured) {
            return fail(p.commands.size(), "non-output " + p.names[v] + " is never measured");
        }
    }
    return {};
}

Pattern standardize(const Pattern& p) {
    const RunnableCheck check = check_runnable(p);
    if (!check) {
        throw Error(ErrorCode::NotRunnable, check.reason + " (command " + std::to_string(*check.index) + ")");
    }
    const PrimeModulus& d = p.modulus;

    VertexSet fresh;
    std::map<std::tuple<VertexId, VertexId>, Zd> weights;
    // (target, signal) -> accumulated power, per correction kind.
    std::map<VertexId, std::map<VertexId, Zd>> x_by_signal;
    std::map<VertexId, std::map<VertexId, Zd>> z_by_signal;
    std::vector<std::size_t> measurements;

    for (std::size_t i = 0; i < p.commands.size(); ++i) {
        const Command& c = p.commands[i];
        switch (c.kind) {
        case CommandKind::N:
            fresh.push_back(c.u);
            break;
        case CommandKind::E: {
            auto& w = weights[edge_key(c.u, c.v)];
            w = d.add(w, d.reduce(c.power));
            break;
        }
        case CommandKind::M:
            measurements.push_back(i);
            break;
        case CommandKind::Z: {
            auto& s = z_by_signal[c.v][c.u];
            s = d.add(s, d.reduce(c.power));
            break;
        }
        case CommandKind::X: {
            const Zd e = d.reduce(c.power);
            auto& s = x_by_signal[c.v][c.u];
            s = d.add(s, e);
            // Every later entangler on the target turns into an extra Z on its partner.
            for (std::size_t j = i + 1; j < p.commands.size(); ++j) {
                const Command& later = p.commands[j];
                if (later.kind != CommandKind::E || (later.u != c.u && later.v != c.u)) {
                    continue;
                }
                const VertexId partner = later.u == c.u ? later.v : later.u;
                auto& zs = z_by_signal[c.v][partner];
                zs = d.add(zs, d.mul(d.reduce(later.power), e));
            }
            break;
        }
        }
    }

    Pattern out{p.modulus, p.names, p.inputs, p.outputs, {}};
    std::sort(fresh.begin(), fresh.end());
    for (VertexId v : fresh) {
        out.commands.push_back(Command::n(v));
    }
    for (const auto& [key, w] : weights) {
        if (w != 0) {
            out.commands.push_back(Command::e(std::get<0>(key), std::get<1>(key), w));
        }
    }
    for (std::size_t i : measurements) {
        const Command& m = p.commands[i];
        Command measured = m;
        measured.label = {d.reduce(m.label.a), d.reduce(m.label.b)};
        out.commands.push_back(measured);
        for (const auto& [target, e] : z_by_signal[m.u]) {
            if (e != 0) {
                out.commands.push_back(Command::z(target, m.u, e));
            }
        }
        for (const auto& [target, e] : x_by_signal[m.u]) {
            if (e != 0) {
                out.commands.push_back(Command::x(target, m.u, e));
            }
        }
    }
    return out;
}

bool is_standard_form(const Pattern& p) {
    if (!check_runnable(p)) {
        return false;
    }
    std::size_t i = 0;
    const auto& cs = p.commands;
    while (i < cs.size() && cs[i].kind == CommandKind::N) {
        ++i;
    }
    while (i < cs.size() && cs[i].kind == CommandKind::E) {
        ++i;
    }
    while (i < cs.size()) {
        if (cs[i].kind != CommandKind::M) {
            return false;
        }
        const VertexId signal = cs[i].u;
        ++i;
        while (i < cs.size() && (cs[i].kind == CommandKind::X || cs[i].kind == CommandKind::Z)) {
            if (cs[i].v != signal) {
                return false;
            }
            ++i;
        }
    }
    return true;
}

Pattern to_pattern(const LabelledOpenGraph& lg, const CorrectionSets& c, const std::vector<VertexId>& order) {
    const OpenGraph& g = lg.graph();
    const PrimeModulus& d = g.modulus();
    Pattern out{d, g.names(), g.inputs(), g.outputs(), {}};
    for (VertexId v : g.non_inputs()) {
        out.commands.push_back(Command::n(v));
    }
    for (const auto& [u, v, w] : g.edges()) {
        out.commands.push_back(Command::e(u, v, w));
    }
    const auto emit = [&](const std::map<VertexId, Multiset>& sets, VertexId v, bool is_x) {
        const auto it = sets.find(v);
        if (it == sets.end()) {
            return;
        }
        for (VertexId u = 0; u < it->second.size(); ++u) {
            const Zd e = d.reduce(it->second[u]);
            if (e != 0) {
                out.commands.push_back(is_x ? Command::x(u, v, e) : Command::z(u, v, e));
            }
        }
    };
    for (VertexId v : order) {
        out.commands.push_back(Command::m(v, lg.label(v)));
        emit(c.z, v, false);
        emit(c.x, v, true);
    }
    return out;
}

Pattern from_flow(const LabelledOpenGraph& g, const ZdFlow& flow) {
    return to_pattern(g, corrections(g, flow), measurement_order(g, flow));
}

ExtractedPattern extract_open_graph(const Pattern& p) {
    if (!is_standard_form(p)) {
        throw Error(ErrorCode::NotStandardForm, "pattern is not runnable in N-E-M block form");
    }
    const PrimeModulus& d = p.modulus;
    const std::size_t n = p.names.size();
    FieldMatrix adjacency(d, n, n);
    Labelling labels(n);
    CorrectionSets c;
    std::vector<VertexId> order;
    std::map<VertexId, std::vector<double>> angles;
    for (const Command& cmd : p.commands) {
        switch (cmd.kind) {
        case CommandKind::N:
            break;
        case CommandKind::E: {
            const Zd w = d.add(adjacency(cmd.u, cmd.v), d.reduce(cmd.power));
            adjacency.set(cmd.u, cmd.v, w);
            adjacency.set(cmd.v, cmd.u, w);
            break;
        }
        case CommandKind::M:
            labels[cmd.u] = PauliLabel{d.reduce(cmd.label.a), d.reduce(cmd.label.b)};
            order.push_back(cmd.u);
            c.x[cmd.u] = Multiset(n, 0);
            c.z[cmd.u] = Multiset(n, 0);
            if (!cmd.angles.empty()) {
                angles[cmd.u] = cmd.angles;
            }
            break;
        case CommandKind::X:
        case CommandKind::Z: {
            auto& set = cmd.kind == CommandKind::X ? c.x[cmd.v] : c.z[cmd.v];
            set[cmd.u] = d.add(set[cmd.u], d.reduce(cmd.power));
            break;
        }
        }
    }
    OpenGraph graph(p.names, std::move(adjacency), p.inputs, p.outputs);
    return {LabelledOpenGraph(std::move(graph), std::move(labels)), std::move(c), std::move(order),
            std::move(angles)};
}

MeasurementChoice pattern_measurements(const Pattern& p, const MeasurementChoice& overrides) {
    MeasurementChoice out;
    for (const Command& c : p.commands) {
        if (c.kind != CommandKind::M) {
            continue;
        }
        if (const auto it = overrides.find(c.u); it != overrides.end()) {
            out[c.u] = it->second;
        } else if (!c.angles.empty()) {
            out[c.u] = measurement_unitary({c.label, c.angles}, p.modulus);
        } else {
            throw Error(ErrorCode::MalformedInput, "no angles for the measurement of " + p.names.at(c.u));
        }
    }
    return out;
}

std::vector<BranchOutcome> pattern_branches(const Pattern& p, const MeasurementChoice& measurements,
                                            const QuditState& input) {
    const RunnableCheck check = check_runnable(p);
    if (!check) {
        throw Error(ErrorCode::NotRunnable, check.reason);
    }
    if (!p.modulus.is_odd()) {
        throw Error(ErrorCode::EvenModulus, "simulation needs an odd prime dimension");
    }
    VertexSet held;
    for (QuditLabel q : input.qudits()) {
        if (q < p.names.size()) {
            held.push_back(q);
        }
    }
    std::sort(held.begin(), held.end());
    if (held != p.inputs) {
        throw Error(ErrorCode::WrongInputRegister, "input state must hold exactly the pattern inputs");
    }
    const Zd d = p.modulus.value();
    const ComplexVector plus = ComplexVector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    const double norm0 = input.norm_squared();

    std::vector<BranchOutcome> level{{{}, 1.0, input}};
    for (const Command& c : p.commands) {
        if (c.kind == CommandKind::M) {
            const auto it = measurements.find(c.u);
            if (it == measurements.end()) {
                throw Error(ErrorCode::MalformedInput, "no measurement given for " + p.names[c.u]);
            }
            const auto basis = eigenbasis(it->second, c.label, p.modulus);
            std::vector<BranchOutcome> next;
            next.reserve(level.size() * d);
            for (const auto& branch : level) {
                for (Zd m = 0; m < d; ++m) {
                    BranchOutcome child{branch.outcomes, 0.0, branch.output.project(c.u, basis[m])};
                    child.outcomes[c.u] = m;
                    next.push_back(std::move(child));
                }
            }
            level = std::move(next);
            continue;
        }
        for (auto& branch : level) {
            QuditState& s = branch.output;
            switch (c.kind) {
            case CommandKind::N:
                s = s.tensor(QuditState(p.modulus, {c.u}, plus));
                break;
            case CommandKind::E:
                s.apply_cz(c.u, c.v, c.power);
                break;
            case CommandKind::X:
                s.apply_x(c.u, p.modulus.mul(p.modulus.reduce(c.power), branch.outcomes.at(c.v)));
                break;
            case CommandKind::Z:
                s.apply_z(c.u, p.modulus.mul(p.modulus.reduce(c.power), branch.outcomes.at(c.v)));
                break;
            case CommandKind::M:
                break;
            }
        }
    }
    for (auto& branch : level) {
        branch.probability = branch.output.norm_squared() / norm0;
    }
    return level;
}

} // namespace zdflow
