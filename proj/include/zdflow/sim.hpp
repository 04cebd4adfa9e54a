#pragma once

// Dense qudit state-vector simulation of open graph states and measurement
// patterns, with the determinism classifier built on full branch enumeration.

#include "zdflow/flow.hpp"
#include "zdflow/graph.hpp"
#include "zdflow/meas.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace zdflow {

/// Label of a simulated qudit. Graph vertices use their VertexId; reference
/// qudits entangled with the inputs use ids >= |V|.
using QuditLabel = std::size_t;

/// Amplitudes over (C^d)^{⊗r}; the first register entry is the most
/// significant digit. Not renormalised implicitly: projections shrink the norm.
class QuditState {
public:
    QuditState(PrimeModulus d, std::vector<QuditLabel> qudits, ComplexVector amplitudes);

    /// The empty register with amplitude 1.
    [[nodiscard]] static QuditState scalar(PrimeModulus d);
    /// |phi>^{⊗k} on the given labels.
    [[nodiscard]] static QuditState product(PrimeModulus d, const std::vector<QuditLabel>& qudits,
                                            const ComplexVector& single);
    /// Normalised complex-Gaussian random state.
    [[nodiscard]] static QuditState random(PrimeModulus d, const std::vector<QuditLabel>& qudits,
                                           std::mt19937_64& rng);

    [[nodiscard]] const PrimeModulus& modulus() const noexcept { return d_; }
    [[nodiscard]] const std::vector<QuditLabel>& qudits() const noexcept { return qudits_; }
    [[nodiscard]] const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] std::size_t position(QuditLabel q) const;
    [[nodiscard]] bool has(QuditLabel q) const noexcept;
    [[nodiscard]] double norm_squared() const { return amplitudes_.squaredNorm(); }
    [[nodiscard]] QuditState normalized() const;

    [[nodiscard]] QuditState tensor(const QuditState& other) const;
    void apply_x(QuditLabel q, Zd power);
    void apply_z(QuditLabel q, Zd power);
    /// E^w: |m>|n> -> omega^{w m n} |m>|n>.
    void apply_cz(QuditLabel u, QuditLabel v, Zd weight);
    void apply_single(QuditLabel q, const ComplexMatrix& u);
    void scale(Complex factor) { amplitudes_ *= factor; }
    /// Contracts qudit q with <ket| and drops it from the register.
    [[nodiscard]] QuditState project(QuditLabel q, const ComplexVector& ket) const;
    /// Same state with the register reordered to `order` (a permutation of qudits()).
    [[nodiscard]] QuditState permuted(const std::vector<QuditLabel>& order) const;

private:
    [[nodiscard]] std::size_t stride(std::size_t position) const;

    PrimeModulus d_;
    std::vector<QuditLabel> qudits_;
    ComplexVector amplitudes_;
};

/// <a|b> after aligning b's register to a's. Throws WrongInputRegister when
/// the registers hold different qudits.
[[nodiscard]] Complex inner_product(const QuditState& a, const QuditState& b);
/// |<a|b>| / (|a| |b|); 0 when either state vanishes.
[[nodiscard]] double fidelity(const QuditState& a, const QuditState& b);

/// Inputs plus one reference qudit per input, labelled |V| + k.
[[nodiscard]] std::vector<QuditLabel> input_register(const OpenGraph& g, bool with_reference);

/// E_G (|phi> ⊗ |0:X>^{I^c}). `input` must hold exactly the inputs among its
/// graph qudits (labels >= |V| are carried along untouched).
[[nodiscard]] QuditState graph_state(const OpenGraph& g, const QuditState& input);

struct StabilizerCheck {
    bool pass = false;
    double max_deviation = 0.0;
};

/// omega^{2^-1 A^T G A} X_A Z_{GA} |G(phi)> = |G(phi)> for `trials` random
/// inputs. Throws InputSupport when A touches an input.
[[nodiscard]] StabilizerCheck check_stabilizer(const OpenGraph& g, const Multiset& a, std::size_t trials,
                                               std::mt19937_64& rng);

/// Measurement unitary per measured vertex.
using MeasurementChoice = std::map<VertexId, ComplexMatrix>;

struct BranchOutcome {
    std::map<VertexId, Zd> outcomes;
    /// Squared norm of the branch output relative to the input.
    double probability = 0.0;
    /// Subnormalised output on the unmeasured qudits.
    QuditState output;
};

/// Executes one branch: for each v in `order`, contract with <m_v:M(v)|
/// then apply Z^{m_v z(v)} and X^{m_v x(v)} to the surviving qudits.
/// Throws OrderViolation when a correction targets a measured qudit and
/// NotInMeasurementSpace when M(v) is not in M(lambda(v)).
[[nodiscard]] BranchOutcome run_branch(const LabelledOpenGraph& g, const CorrectionSets& c,
                                       const MeasurementChoice& measurements, const std::map<VertexId, Zd>& outcomes,
                                       const std::vector<VertexId>& order, const QuditState& input);

/// All d^|order| branches, sorted by outcome string.
[[nodiscard]] std::vector<BranchOutcome> enumerate_branches(const LabelledOpenGraph& g, const CorrectionSets& c,
                                                            const MeasurementChoice& measurements,
                                                            const std::vector<VertexId>& order,
                                                            const QuditState& input);

/// Measured vertices in an order compatible with the corrections (a vertex
/// after everything it is corrected by), smallest id first among ties.
[[nodiscard]] std::vector<VertexId> default_order(const LabelledOpenGraph& g, const CorrectionSets& c);

/// Random measurement from M(lambda(v)) for every measured vertex.
[[nodiscard]] MeasurementChoice random_measurements(const LabelledOpenGraph& g, std::mt19937_64& rng);

enum class Verdict { NotDeterministic, Deterministic, Strong, RobustEvidence };

[[nodiscard]] std::string to_string(Verdict v);

struct ClassifyConfig {
    std::uint64_t seed = 0;
    std::size_t draws = 20;
    std::size_t inputs = 5;
    std::size_t max_branches = 729;
    /// Also require strong determinism after every prefix of the order.
    bool check_prefixes = true;
    /// Entangle the inputs with a reference register so that proportional
    /// outputs certify proportional branch maps.
    bool reference = true;
    std::optional<std::vector<VertexId>> order;
};

struct DeterminismReport {
    Verdict verdict = Verdict::NotDeterministic;
    std::uint64_t seed = 0;
    std::size_t branches = 0;
    std::size_t runs = 0;
    /// Smallest fidelity between a nonzero branch and the most likely branch.
    double min_fidelity = 1.0;
    /// Largest |p - d^-|O^c|| over all branches of the full pattern.
    double max_probability_deviation = 0.0;
    /// Branch probabilities of the first run, by outcome string.
    std::vector<double> probabilities;
    /// Prefix length at which strong determinism first failed, if it did.
    std::optional<std::size_t> failing_prefix;
    std::vector<VertexId> order;
};

/// Throws TooManyBranches when d^|O^c| exceeds config.max_branches.
[[nodiscard]] DeterminismReport classify_determinism(const LabelledOpenGraph& g, const CorrectionSets& c,
                                                     const ClassifyConfig& config);

} // namespace zdflow
