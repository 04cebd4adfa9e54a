#pragma once

// Measurement spaces M(a,b): reference axes, angle-parametrised measurement
// unitaries and their eigenbases |m:M> = Q^{-m}|0:M>.

#include "zdflow/gfp.hpp"
#include "zdflow/pauli_label.hpp"

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <vector>

namespace zdflow {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kRelationTolerance = 1e-9;

struct MeasurementSpec {
    PauliLabel label;
    /// theta_1 .. theta_{d-1} in radians; theta_0 = -sum so that det U = 1.
    std::vector<double> angles;
};

/// omega^k with omega = exp(2 pi i / d).
[[nodiscard]] Complex root_of_unity(Zd d, std::int64_t k);

/// Matrix of X^a Z^b with X|m> = |m+1>, Z|m> = omega^m |m>. Throws EvenModulus for d = 2.
[[nodiscard]] ComplexMatrix pauli_matrix(PauliLabel label, const PrimeModulus& d);

/// (c, e) with b c - e a = 1 (mod d): (0, -a^-1) when a != 0, else (b^-1, 0).
/// X^c Z^e then lies in M(a, b). Throws ZeroLabel.
[[nodiscard]] PauliLabel canonical_axis(PauliLabel label, const PrimeModulus& d);

/// Spectral projector of X^a Z^b onto its omega^k eigenspace.
[[nodiscard]] ComplexMatrix pauli_projector(PauliLabel label, const PrimeModulus& d, Zd k);

/// M = U P U^dagger with P the canonical axis and U = sum_k e^{i theta_k} P_k
/// diagonal in the eigenbasis of X^a Z^b.
[[nodiscard]] ComplexMatrix measurement_unitary(const MeasurementSpec& spec, const PrimeModulus& d);

/// Frobenius norm of Q M - omega M Q for Q = X^a Z^b.
[[nodiscard]] double commutation_residual(const ComplexMatrix& m, PauliLabel label, const PrimeModulus& d);
[[nodiscard]] double unitarity_residual(const ComplexMatrix& m);

/// Unitary, satisfies the defining relation and has a unit eigenvalue.
[[nodiscard]] bool in_measurement_space(const ComplexMatrix& m, PauliLabel label, const PrimeModulus& d);

/// |0:M>, ..., |d-1:M>. |0:M> is the fixpoint with its first nonzero
/// amplitude real and positive. Throws NotInMeasurementSpace.
[[nodiscard]] std::vector<ComplexVector> eigenbasis(const ComplexMatrix& m, PauliLabel label, const PrimeModulus& d);

[[nodiscard]] MeasurementSpec random_measurement_spec(PauliLabel label, const PrimeModulus& d, std::mt19937_64& rng);

/// Special unitary commuting with X^a Z^b, drawn as random phases on its eigenspaces.
[[nodiscard]] ComplexMatrix random_commuting_special_unitary(PauliLabel label, const PrimeModulus& d,
                                                             std::mt19937_64& rng);

} // namespace zdflow
