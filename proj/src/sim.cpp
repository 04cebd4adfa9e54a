#include "zdflow/sim.hpp"

#include "zdflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zdflow {

namespace {

constexpr double kFidelityTolerance = 1e-9;
constexpr double kProbabilityTolerance = 1e-9;
constexpr double kZeroProbability = 1e-12;

std::size_t checked_power(Zd d, std::size_t k) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < k; ++i) {
        out *= d;
    }
    return out;
}

std::size_t digit(std::size_t index, std::size_t stride, Zd d) { return (index / stride) % d; }

void require_odd(const PrimeModulus& d) {
    if (!d.is_odd()) {
        throw Error(ErrorCode::EvenModulus, "simulation needs an odd prime dimension");
    }
}

} // namespace

QuditState::QuditState(PrimeModulus d, std::vector<QuditLabel> qudits, ComplexVector amplitudes)
    : d_(d), qudits_(std::move(qudits)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != checked_power(d_.value(), qudits_.size())) {
        throw Error(ErrorCode::DimensionMismatch, "amplitude count does not match register size");
    }
    auto sorted = qudits_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorCode::WrongInputRegister, "repeated qudit in register");
    }
}

QuditState QuditState::scalar(PrimeModulus d) {
    ComplexVector one(1);
    one(0) = 1.0;
    return {d, {}, one};
}

QuditState QuditState::product(PrimeModulus d, const std::vector<QuditLabel>& qudits, const ComplexVector& single) {
    QuditState out = scalar(d);
    for (QuditLabel q : qudits) {
        out = out.tensor(QuditState(d, {q}, single));
    }
    return out;
}

QuditState QuditState::random(PrimeModulus d, const std::vector<QuditLabel>& qudits, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    ComplexVector amps(static_cast<Eigen::Index>(checked_power(d.value(), qudits.size())));
    for (auto& a : amps) {
        a = Complex(gauss(rng), gauss(rng));
    }
    amps.normalize();
    return {d, qudits, amps};
}

std::size_t QuditState::position(QuditLabel q) const {
    const auto it = std::find(qudits_.begin(), qudits_.end(), q);
    if (it == qudits_.end()) {
        throw Error(ErrorCode::OrderViolation, "qudit " + std::to_string(q) + " is not in the register");
    }
    return static_cast<std::size_t>(it - qudits_.begin());
}

bool QuditState::has(QuditLabel q) const noexcept {
    return std::find(qudits_.begin(), qudits_.end(), q) != qudits_.end();
}

std::size_t QuditState::stride(std::size_t position) const {
    return checked_power(d_.value(), qudits_.size() - 1 - position);
}

QuditState QuditState::normalized() const {
    const double n = amplitudes_.norm();
    return {d_, qudits_, n > 0.0 ? ComplexVector(amplitudes_ / n) : amplitudes_};
}

QuditState QuditState::tensor(const QuditState& other) const {
    if (other.d_ != d_) {
        throw Error(ErrorCode::DimensionMismatch, "tensor product across different dimensions");
    }
    std::vector<QuditLabel> qudits = qudits_;
    qudits.insert(qudits.end(), other.qudits_.begin(), other.qudits_.end());
    const auto n = other.amplitudes_.size();
    ComplexVector amps(amplitudes_.size() * n);
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
        amps.segment(i * n, n) = amplitudes_(i) * other.amplitudes_;
    }
    return {d_, std::move(qudits), std::move(amps)};
}

void QuditState::apply_x(QuditLabel q, Zd power) {
    power = d_.reduce(power);
    if (power == 0) {
        return;
    }
    const std::size_t s = stride(position(q));
    const Zd d = d_.value();
    ComplexVector out(amplitudes_.size());
    for (std::size_t i = 0; i < static_cast<std::size_t>(amplitudes_.size()); ++i) {
        const std::size_t m = digit(i, s, d);
        const std::size_t j = i - m * s + ((m + power) % d) * s;
        out(static_cast<Eigen::Index>(j)) = amplitudes_(static_cast<Eigen::Index>(i));
    }
    amplitudes_ = std::move(out);
}

void QuditState::apply_z(QuditLabel q, Zd power) {
    power = d_.reduce(power);
    if (power == 0) {
        return;
    }
    const std::size_t s = stride(position(q));
    const Zd d = d_.value();
    for (std::size_t i = 0; i < static_cast<std::size_t>(amplitudes_.size()); ++i) {
        amplitudes_(static_cast<Eigen::Index>(i)) *=
            root_of_unity(d, static_cast<std::int64_t>(power) * static_cast<std::int64_t>(digit(i, s, d)));
    }
}

void QuditState::apply_cz(QuditLabel u, QuditLabel v, Zd weight) {
    weight = d_.reduce(weight);
    if (weight == 0) {
        return;
    }
    const std::size_t su = stride(position(u));
    const std::size_t sv = stride(position(v));
    const Zd d = d_.value();
    for (std::size_t i = 0; i < static_cast<std::size_t>(amplitudes_.size()); ++i) {
        const auto e = static_cast<std::int64_t>(weight) * static_cast<std::int64_t>(digit(i, su, d)) *
                       static_cast<std::int64_t>(digit(i, sv, d));
        amplitudes_(static_cast<Eigen::Index>(i)) *= root_of_unity(d, e);
    }
}

void QuditState::apply_single(QuditLabel q, const ComplexMatrix& u) {
    const Zd d = d_.value();
    if (u.rows() != d || u.cols() != d) {
        throw Error(ErrorCode::DimensionMismatch, "single-qudit operator has the wrong size");
    }
    const std::size_t s = stride(position(q));
    const std::size_t total = static_cast<std::size_t>(amplitudes_.size());
    ComplexVector local(d);
    for (std::size_t hi = 0; hi < total; hi += s * d) {
        for (std::size_t lo = 0; lo < s; ++lo) {
            for (Zd m = 0; m < d; ++m) {
                local(m) = amplitudes_(static_cast<Eigen::Index>(hi + m * s + lo));
            }
            const ComplexVector mapped = u * local;
            for (Zd m = 0; m < d; ++m) {
                amplitudes_(static_cast<Eigen::Index>(hi + m * s + lo)) = mapped(m);
            }
        }
    }
}

QuditState QuditState::project(QuditLabel q, const ComplexVector& ket) const {
    const Zd d = d_.value();
    if (ket.size() != d) {
        throw Error(ErrorCode::DimensionMismatch, "projection vector has the wrong size");
    }
    const std::size_t p = position(q);
    const std::size_t s = stride(p);
    const std::size_t total = static_cast<std::size_t>(amplitudes_.size());
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(total / d));
    for (std::size_t hi = 0; hi < total / (s * d); ++hi) {
        for (std::size_t lo = 0; lo < s; ++lo) {
            Complex acc = 0.0;
            for (Zd m = 0; m < d; ++m) {
                acc += std::conj(ket(m)) * amplitudes_(static_cast<Eigen::Index>(hi * s * d + m * s + lo));
            }
            out(static_cast<Eigen::Index>(hi * s + lo)) = acc;
        }
    }
    std::vector<QuditLabel> qudits = qudits_;
    qudits.erase(qudits.begin() + static_cast<std::ptrdiff_t>(p));
    return {d_, std::move(qudits), std::move(out)};
}

QuditState QuditState::permuted(const std::vector<QuditLabel>& order) const {
    if (order == qudits_) {
        return *this;
    }
    if (order.size() != qudits_.size()) {
        throw Error(ErrorCode::WrongInputRegister, "permutation has the wrong length");
    }
    const Zd d = d_.value();
    std::vector<std::size_t> new_stride(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        new_stride[k] = checked_power(d, order.size() - 1 - k);
    }
    // Stride in the new layout of each old position.
    std::vector<std::size_t> target(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        target[position(order[k])] = new_stride[k];
    }
    ComplexVector out(amplitudes_.size());
    for (std::size_t i = 0; i < static_cast<std::size_t>(amplitudes_.size()); ++i) {
        std::size_t j = 0;
        std::size_t rest = i;
        for (std::size_t p = qudits_.size(); p-- > 0;) {
            j += (rest % d) * target[p];
            rest /= d;
        }
        out(static_cast<Eigen::Index>(j)) = amplitudes_(static_cast<Eigen::Index>(i));
    }
    return {d_, order, std::move(out)};
}

Complex inner_product(const QuditState& a, const QuditState& b) {
    auto sa = a.qudits();
    auto sb = b.qudits();
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb || a.modulus() != b.modulus()) {
        throw Error(ErrorCode::WrongInputRegister, "states live on different registers");
    }
    return a.amplitudes().dot(b.permuted(a.qudits()).amplitudes());
}

double fidelity(const QuditState& a, const QuditState& b) {
    const double na = a.amplitudes().norm();
    const double nb = b.amplitudes().norm();
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return std::abs(inner_product(a, b)) / (na * nb);
}

std::vector<QuditLabel> input_register(const OpenGraph& g, bool with_reference) {
    std::vector<QuditLabel> out(g.inputs().begin(), g.inputs().end());
    if (with_reference) {
        for (std::size_t k = 0; k < g.inputs().size(); ++k) {
            out.push_back(g.size() + k);
        }
    }
    return out;
}

QuditState graph_state(const OpenGraph& g, const QuditState& input) {
    require_odd(g.modulus());
    if (input.modulus() != g.modulus()) {
        throw Error(ErrorCode::WrongInputRegister, "input state has the wrong dimension");
    }
    VertexSet held;
    for (QuditLabel q : input.qudits()) {
        if (q < g.size()) {
            held.push_back(q);
        }
    }
    std::sort(held.begin(), held.end());
    if (held != g.inputs()) {
        throw Error(ErrorCode::WrongInputRegister, "input state must hold exactly the input vertices");
    }
    const Zd d = g.modulus().value();
    const ComplexVector plus = ComplexVector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    QuditState state = input.tensor(QuditState::product(g.modulus(), g.non_inputs(), plus));
    for (const auto& [u, v, w] : g.edges()) {
        state.apply_cz(u, v, w);
    }
    return state;
}

StabilizerCheck check_stabilizer(const OpenGraph& g, const Multiset& a, std::size_t trials, std::mt19937_64& rng) {
    const PrimeModulus& d = g.modulus();
    require_odd(d);
    if (a.size() != g.size()) {
        throw Error(ErrorCode::DimensionMismatch, "multiset length differs from |V|");
    }
    for (VertexId v : g.inputs()) {
        if (d.reduce(a[v]) != 0) {
            throw Error(ErrorCode::InputSupport, "stabilizer multiset touches input " + g.name(v));
        }
    }
    const FieldVector ga = mat_vec(g.adjacency(), a);
    Zd quad = 0;
    for (std::size_t v = 0; v < a.size(); ++v) {
        quad = d.add(quad, d.mul(d.reduce(a[v]), ga[v]));
    }
    const Zd phase = d.mul(d.inv(2), quad);

    StabilizerCheck out;
    out.pass = true;
    for (std::size_t t = 0; t < trials; ++t) {
        const QuditState state = graph_state(g, QuditState::random(d, input_register(g, true), rng));
        QuditState image = state;
        for (VertexId v = 0; v < g.size(); ++v) {
            image.apply_z(v, ga[v]);
        }
        for (VertexId v = 0; v < g.size(); ++v) {
            image.apply_x(v, d.reduce(a[v]));
        }
        image.scale(root_of_unity(d.value(), phase));
        const double dev = (image.amplitudes() - state.amplitudes()).norm() / state.amplitudes().norm();
        out.max_deviation = std::max(out.max_deviation, dev);
    }
    out.pass = out.max_deviation <= kRelationTolerance;
    return out;
}

namespace {

struct MeasurementStep {
    VertexId vertex;
    std::vector<ComplexVector> basis;
    std::vector<std::pair<VertexId, Zd>> x;
    std::vector<std::pair<VertexId, Zd>> z;
};

// Checks the order against the measured set and precomputes eigenbases.
std::vector<MeasurementStep> compile_steps(const LabelledOpenGraph& lg, const CorrectionSets& c,
                                           const MeasurementChoice& measurements,
                                           const std::vector<VertexId>& order) {
    const OpenGraph& g = lg.graph();
    const VertexSet measured = g.non_outputs();
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != measured) {
        throw Error(ErrorCode::OrderViolation, "order must list every non-output exactly once");
    }
    std::vector<bool> done(g.size(), false);
    std::vector<MeasurementStep> steps;
    for (VertexId v : order) {
        done[v] = true;
        MeasurementStep step{v, {}, {}, {}};
        const auto m = measurements.find(v);
        if (m == measurements.end()) {
            throw Error(ErrorCode::MalformedInput, "no measurement given for " + g.name(v));
        }
        step.basis = eigenbasis(m->second, lg.label(v), g.modulus());
        const auto collect = [&](const std::map<VertexId, Multiset>& sets, auto& into) {
            const auto it = sets.find(v);
            if (it == sets.end()) {
                return;
            }
            for (VertexId u = 0; u < it->second.size(); ++u) {
                const Zd e = g.modulus().reduce(it->second[u]);
                if (e == 0) {
                    continue;
                }
                if (done[u]) {
                    throw Error(ErrorCode::OrderViolation,
                                "correction from " + g.name(v) + " targets measured vertex " + g.name(u));
                }
                into.emplace_back(u, e);
            }
        };
        collect(c.x, step.x);
        collect(c.z, step.z);
        steps.push_back(std::move(step));
    }
    return steps;
}

QuditState apply_step(const QuditState& state, const MeasurementStep& step, Zd outcome) {
    QuditState next = state.project(step.vertex, step.basis[outcome]);
    const Zd d = state.modulus().value();
    for (const auto& [u, e] : step.z) {
        next.apply_z(u, static_cast<Zd>((static_cast<std::uint64_t>(e) * outcome) % d));
    }
    for (const auto& [u, e] : step.x) {
        next.apply_x(u, static_cast<Zd>((static_cast<std::uint64_t>(e) * outcome) % d));
    }
    return next;
}

} // namespace

BranchOutcome run_branch(const LabelledOpenGraph& g, const CorrectionSets& c, const MeasurementChoice& measurements,
                         const std::map<VertexId, Zd>& outcomes, const std::vector<VertexId>& order,
                         const QuditState& input) {
    const auto steps = compile_steps(g, c, measurements, order);
    QuditState state = graph_state(g.graph(), input);
    const double norm0 = input.norm_squared();
    BranchOutcome out{{}, 0.0, state};
    for (const auto& step : steps) {
        const auto it = outcomes.find(step.vertex);
        if (it == outcomes.end()) {
            throw Error(ErrorCode::MalformedInput, "no outcome for " + g.graph().name(step.vertex));
        }
        const Zd m = g.graph().modulus().reduce(it->second);
        out.outcomes[step.vertex] = m;
        state = apply_step(state, step, m);
    }
    out.probability = state.norm_squared() / norm0;
    out.output = std::move(state);
    return out;
}

std::vector<BranchOutcome> enumerate_branches(const LabelledOpenGraph& g, const CorrectionSets& c,
                                              const MeasurementChoice& measurements,
                                              const std::vector<VertexId>& order, const QuditState& input) {
    const auto steps = compile_steps(g, c, measurements, order);
    const double norm0 = input.norm_squared();
    const Zd d = g.graph().modulus().value();
    std::vector<BranchOutcome> level{{{}, 1.0, graph_state(g.graph(), input)}};
    for (const auto& step : steps) {
        std::vector<BranchOutcome> next;
        next.reserve(level.size() * d);
        for (const auto& branch : level) {
            for (Zd m = 0; m < d; ++m) {
                BranchOutcome child{branch.outcomes, 0.0, apply_step(branch.output, step, m)};
                child.outcomes[step.vertex] = m;
                next.push_back(std::move(child));
            }
        }
        level = std::move(next);
    }
    for (auto& branch : level) {
        branch.probability = branch.output.norm_squared() / norm0;
    }
    return level;
}

std::vector<VertexId> default_order(const LabelledOpenGraph& g, const CorrectionSets& c) {
    const PartialOrder order = induced_order(c);
    const VertexSet measured = g.graph().non_outputs();
    std::vector<VertexId> out;
    std::vector<bool> placed(g.graph().size(), false);
    while (out.size() < measured.size()) {
        bool progress = false;
        for (VertexId u : measured) {
            if (placed[u]) {
                continue;
            }
            const bool ready = std::all_of(measured.begin(), measured.end(),
                                           [&](VertexId v) { return placed[v] || !order.relates(u, v); });
            if (ready) {
                placed[u] = true;
                out.push_back(u);
                progress = true;
                break;
            }
        }
        if (!progress) {
            throw Error(ErrorCode::CyclicDependency, "corrections admit no measurement order");
        }
    }
    return out;
}

MeasurementChoice random_measurements(const LabelledOpenGraph& g, std::mt19937_64& rng) {
    MeasurementChoice out;
    for (VertexId v : g.graph().non_outputs()) {
        out[v] = measurement_unitary(random_measurement_spec(g.label(v), g.graph().modulus(), rng),
                                     g.graph().modulus());
    }
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::NotDeterministic:
        return "not-deterministic";
    case Verdict::Deterministic:
        return "deterministic";
    case Verdict::Strong:
        return "strong";
    case Verdict::RobustEvidence:
        return "robust-evidence";
    }
    return "unknown";
}

namespace {

struct LevelCheck {
    bool deterministic = true;
    bool strong = true;
    double min_fidelity = 1.0;
    double max_deviation = 0.0;
};

LevelCheck check_level(const std::vector<BranchOutcome>& level, double norm0, double expected) {
    LevelCheck out;
    std::size_t best = 0;
    std::vector<double> probs(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) {
        probs[i] = level[i].output.norm_squared() / norm0;
        if (probs[i] > probs[best]) {
            best = i;
        }
        out.max_deviation = std::max(out.max_deviation, std::abs(probs[i] - expected));
    }
    for (std::size_t i = 0; i < level.size(); ++i) {
        if (probs[i] <= kZeroProbability) {
            continue;
        }
        out.min_fidelity = std::min(out.min_fidelity, fidelity(level[best].output, level[i].output));
    }
    out.deterministic = out.min_fidelity >= 1.0 - kFidelityTolerance;
    out.strong = out.deterministic && out.max_deviation <= kProbabilityTolerance;
    return out;
}

} // namespace

DeterminismReport classify_determinism(const LabelledOpenGraph& g, const CorrectionSets& c,
                                       const ClassifyConfig& config) {
    const OpenGraph& graph = g.graph();
    require_odd(graph.modulus());
    const Zd d = graph.modulus().value();
    const std::size_t measured = graph.non_outputs().size();
    std::size_t branches = 1;
    for (std::size_t k = 0; k < measured; ++k) {
        branches *= d;
        if (branches > config.max_branches) {
            throw Error(ErrorCode::TooManyBranches, std::to_string(d) + "^" + std::to_string(measured) +
                                                        " branches exceed the cap of " +
                                                        std::to_string(config.max_branches));
        }
    }

    DeterminismReport report;
    report.seed = config.seed;
    report.branches = branches;
    report.order = config.order ? *config.order : default_order(g, c);
    const PartialOrder order = induced_order(c);
    std::vector<std::size_t> position(graph.size(), 0);
    for (std::size_t k = 0; k < report.order.size(); ++k) {
        position.at(report.order[k]) = k;
    }
    for (const auto& [u, v] : order.pairs) {
        if (!graph.is_output(u) && position[v] > position[u]) {
            throw Error(ErrorCode::OrderViolation, "order measures " + graph.name(u) + " before " + graph.name(v) +
                                                       " although it is corrected by it");
        }
    }

    std::mt19937_64 rng(config.seed);
    bool deterministic = true;
    bool strong = true;
    const std::size_t draws = std::max<std::size_t>(config.draws, 1);
    const std::size_t inputs = std::max<std::size_t>(config.inputs, 1);
    for (std::size_t draw = 0; draw < draws; ++draw) {
        const MeasurementChoice measurements = random_measurements(g, rng);
        const auto steps = compile_steps(g, c, measurements, report.order);
        for (std::size_t in = 0; in < inputs; ++in) {
            const QuditState input = QuditState::random(graph.modulus(), input_register(graph, config.reference), rng);
            const double norm0 = input.norm_squared();
            std::vector<BranchOutcome> level{{{}, 1.0, graph_state(graph, input)}};
            double expected = 1.0;
            for (std::size_t k = 0; k < steps.size(); ++k) {
                std::vector<BranchOutcome> next;
                next.reserve(level.size() * d);
                for (const auto& branch : level) {
                    for (Zd m = 0; m < d; ++m) {
                        next.push_back({{}, 0.0, apply_step(branch.output, steps[k], m)});
                    }
                }
                level = std::move(next);
                expected /= d;
                if (config.check_prefixes && k + 1 < steps.size()) {
                    const LevelCheck prefix = check_level(level, norm0, expected);
                    if (!prefix.strong && (!report.failing_prefix || *report.failing_prefix > k + 1)) {
                        report.failing_prefix = k + 1;
                    }
                }
            }
            const LevelCheck full = check_level(level, norm0, expected);
            deterministic = deterministic && full.deterministic;
            strong = strong && full.strong;
            report.min_fidelity = std::min(report.min_fidelity, full.min_fidelity);
            report.max_probability_deviation = std::max(report.max_probability_deviation, full.max_deviation);
            if (report.runs == 0) {
                for (const auto& branch : level) {
                    report.probabilities.push_back(branch.output.norm_squared() / norm0);
                }
            }
            ++report.runs;
        }
    }

    if (!deterministic) {
        report.verdict = Verdict::NotDeterministic;
    } else if (!strong) {
        report.verdict = Verdict::Deterministic;
    } else if (!config.check_prefixes || report.failing_prefix) {
        report.verdict = Verdict::Strong;
    } else {
        report.verdict = Verdict::RobustEvidence;
    }
    return report;
}

} // namespace zdflow
