#pragma once

// Measurement patterns: command sequences, runnability, standardisation and
// conversion to and from labelled open graphs with corrections.

#include "zdflow/flow.hpp"
#include "zdflow/graph.hpp"
#include "zdflow/sim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zdflow {

enum class CommandKind { N, E, M, X, Z };

/// One command. Field use by kind:
///   N: u.  E: u, v, power (the edge weight).  M: u, label, angles.
///   X/Z: u is the target, v the signal vertex, power the multiplier e in X_u^{e m_v}.
struct Command {
    CommandKind kind = CommandKind::N;
    VertexId u = 0;
    VertexId v = 0;
    Zd power = 0;
    PauliLabel label;
    /// Empty means "any measurement in the space", to be supplied at execution.
    std::vector<double> angles;

    [[nodiscard]] static Command n(VertexId u) { return {CommandKind::N, u, 0, 0, {}, {}}; }
    [[nodiscard]] static Command e(VertexId u, VertexId v, Zd w) { return {CommandKind::E, u, v, w, {}, {}}; }
    [[nodiscard]] static Command m(VertexId u, PauliLabel l, std::vector<double> angles = {}) {
        return {CommandKind::M, u, 0, 0, l, std::move(angles)};
    }
    [[nodiscard]] static Command x(VertexId target, VertexId signal, Zd p = 1) {
        return {CommandKind::X, target, signal, p, {}, {}};
    }
    [[nodiscard]] static Command z(VertexId target, VertexId signal, Zd p = 1) {
        return {CommandKind::Z, target, signal, p, {}, {}};
    }

    friend bool operator==(const Command&, const Command&) = default;
};

/// Commands are stored in execution order: commands[0] runs first. This is
/// the reverse of the operator-product notation.
struct Pattern {
    PrimeModulus modulus{3};
    std::vector<std::string> names;
    VertexSet inputs;
    VertexSet outputs;
    std::vector<Command> commands;

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct RunnableCheck {
    bool runnable = true;
    /// Offending command; equals commands.size() for end-of-pattern failures
    /// such as an unmeasured non-output.
    std::optional<std::size_t> index;
    std::string reason;

    explicit operator bool() const noexcept { return runnable; }
};

/// Commands only touch initialised, unmeasured qudits; corrections only use
/// outcomes already produced; each non-input is initialised once and each
/// non-output measured once; outputs are never measured. Malformed commands
/// (unknown vertex, E on a single qudit, zero label) also fail here.
[[nodiscard]] RunnableCheck check_runnable(const Pattern& p);

/// N-block, E-block, then one block per measured vertex: M_v followed by
/// the Z and then the X corrections conditioned on m_v. Corrections are
/// pushed past later entanglers with E^w X_u^s = X_u^s Z_v^{ws} E^w; repeated
/// commands are merged and zero powers dropped. Equal to the input up to a
/// global phase per branch. Throws NotRunnable.
[[nodiscard]] Pattern standardize(const Pattern& p);

[[nodiscard]] bool is_standard_form(const Pattern& p);

/// Standard-form pattern for (G, I, O, lambda, x, z) measured in `order`.
[[nodiscard]] Pattern to_pattern(const LabelledOpenGraph& g, const CorrectionSets& c,
                                 const std::vector<VertexId>& order);

/// to_pattern with the flow's corrections and layer order. Throws InvalidFlow.
[[nodiscard]] Pattern from_flow(const LabelledOpenGraph& g, const ZdFlow& flow);

struct ExtractedPattern {
    LabelledOpenGraph graph;
    CorrectionSets corrections;
    std::vector<VertexId> order;
    /// Angles given in the pattern, keyed by vertex.
    std::map<VertexId, std::vector<double>> angles;
};

/// Reads the tuple back from a standard-form pattern; repeated E commands on
/// one pair add their weights. Throws NotStandardForm.
[[nodiscard]] ExtractedPattern extract_open_graph(const Pattern& p);

/// Measurement per M command: `overrides` first, then the command's angles.
/// Throws MalformedInput when neither is available.
[[nodiscard]] MeasurementChoice pattern_measurements(const Pattern& p, const MeasurementChoice& overrides = {});

/// Runs every branch of `p` on `input` (which must hold exactly p's inputs
/// among labels < |names|), sorted by outcome string in measurement order.
/// Throws NotRunnable.
[[nodiscard]] std::vector<BranchOutcome> pattern_branches(const Pattern& p, const MeasurementChoice& measurements,
                                                          const QuditState& input);

[[nodiscard]] std::string to_string(CommandKind k);

} // namespace zdflow
