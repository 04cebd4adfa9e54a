#include "zdflow/meas.hpp"

#include "zdflow/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace zdflow {

namespace {

void require_odd(const PrimeModulus& d) {
    if (!d.is_odd()) {
        throw Error(ErrorCode::EvenModulus, "qudit operators need an odd prime dimension");
    }
}

void require_nonzero(PauliLabel label) {
    if (label.is_zero()) {
        throw Error(ErrorCode::ZeroLabel, "measurement label (0,0)");
    }
}

ComplexMatrix unitary_from_phases(PauliLabel label, const PrimeModulus& d, const std::vector<double>& phases) {
    const auto n = static_cast<Eigen::Index>(d.value());
    ComplexMatrix u = ComplexMatrix::Zero(n, n);
    for (Zd k = 0; k < d.value(); ++k) {
        u += std::polar(1.0, phases[k]) * pauli_projector(label, d, k);
    }
    return u;
}

} // namespace

Complex root_of_unity(Zd d, std::int64_t k) {
    const auto r = ((k % static_cast<std::int64_t>(d)) + d) % d;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(d));
}

ComplexMatrix pauli_matrix(PauliLabel label, const PrimeModulus& d) {
    require_odd(d);
    const Zd dim = d.value();
    ComplexMatrix q = ComplexMatrix::Zero(dim, dim);
    for (Zd m = 0; m < dim; ++m) {
        q(d.add(m, label.a % dim), m) = root_of_unity(dim, static_cast<std::int64_t>(d.mul(label.b % dim, m)));
    }
    return q;
}

PauliLabel canonical_axis(PauliLabel label, const PrimeModulus& d) {
    require_nonzero(label);
    if (label.a % d.value() != 0) {
        return {0, d.neg(d.inv(label.a))};
    }
    return {d.inv(label.b), 0};
}

ComplexMatrix pauli_projector(PauliLabel label, const PrimeModulus& d, Zd k) {
    require_nonzero(label);
    const Zd dim = d.value();
    const ComplexMatrix q = pauli_matrix(label, d);
    ComplexMatrix power = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (Zd j = 0; j < dim; ++j) {
        out += root_of_unity(dim, -static_cast<std::int64_t>(d.mul(k, j))) * power;
        power = power * q;
    }
    return out / static_cast<double>(dim);
}

ComplexMatrix measurement_unitary(const MeasurementSpec& spec, const PrimeModulus& d) {
    require_odd(d);
    require_nonzero(spec.label);
    if (spec.angles.size() + 1 != d.value()) {
        throw Error(ErrorCode::MalformedInput, "expected " + std::to_string(d.value() - 1) + " angles, got " +
                                                   std::to_string(spec.angles.size()));
    }
    std::vector<double> phases(d.value(), 0.0);
    for (std::size_t k = 0; k < spec.angles.size(); ++k) {
        phases[k + 1] = spec.angles[k];
        phases[0] -= spec.angles[k];
    }
    const ComplexMatrix u = unitary_from_phases(spec.label, d, phases);
    const ComplexMatrix p = pauli_matrix(canonical_axis(spec.label, d), d);
    return u * p * u.adjoint();
}

double commutation_residual(const ComplexMatrix& m, PauliLabel label, const PrimeModulus& d) {
    const ComplexMatrix q = pauli_matrix(label, d);
    return (q * m - root_of_unity(d.value(), 1) * m * q).norm();
}

double unitarity_residual(const ComplexMatrix& m) {
    return (m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols())).norm();
}

bool in_measurement_space(const ComplexMatrix& m, PauliLabel label, const PrimeModulus& d) {
    try {
        (void)eigenbasis(m, label, d);
        return true;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotInMeasurementSpace) {
            return false;
        }
        throw;
    }
}

std::vector<ComplexVector> eigenbasis(const ComplexMatrix& m, PauliLabel label, const PrimeModulus& d) {
    require_odd(d);
    require_nonzero(label);
    const Zd dim = d.value();
    if (m.rows() != dim || m.cols() != dim) {
        throw Error(ErrorCode::DimensionMismatch, "measurement must be a d x d matrix");
    }
    if (unitarity_residual(m) > kRelationTolerance) {
        throw Error(ErrorCode::NotInMeasurementSpace, "matrix is not unitary");
    }
    if (commutation_residual(m, label, d) > kRelationTolerance) {
        throw Error(ErrorCode::NotInMeasurementSpace, "X^a Z^b M != omega M X^a Z^b");
    }

    // Average of M^j projects onto the fixpoint space whenever M^d = I.
    ComplexMatrix average = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix power = ComplexMatrix::Identity(dim, dim);
    for (Zd j = 0; j < dim; ++j) {
        average += power;
        power = power * m;
    }
    average /= static_cast<double>(dim);
    Eigen::Index best = 0;
    average.colwise().norm().maxCoeff(&best);
    ComplexVector fixpoint = average.col(best);
    if (fixpoint.norm() < 1e-6) {
        throw Error(ErrorCode::NotInMeasurementSpace, "M has no fixpoint");
    }
    fixpoint.normalize();
    if ((m * fixpoint - fixpoint).norm() > kRelationTolerance) {
        throw Error(ErrorCode::NotInMeasurementSpace, "M has no fixpoint");
    }
    for (Eigen::Index i = 0; i < fixpoint.size(); ++i) {
        if (std::abs(fixpoint(i)) > 1e-9) {
            fixpoint *= std::conj(fixpoint(i)) / std::abs(fixpoint(i));
            fixpoint(i) = std::abs(fixpoint(i));
            break;
        }
    }

    const ComplexMatrix q_inverse = pauli_matrix(label, d).adjoint();
    std::vector<ComplexVector> basis;
    basis.reserve(dim);
    ComplexVector current = fixpoint;
    for (Zd k = 0; k < dim; ++k) {
        basis.push_back(current);
        current = q_inverse * current;
    }
    return basis;
}

MeasurementSpec random_measurement_spec(PauliLabel label, const PrimeModulus& d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    MeasurementSpec spec{label, std::vector<double>(d.value() - 1)};
    for (auto& theta : spec.angles) {
        theta = angle(rng);
    }
    return spec;
}

ComplexMatrix random_commuting_special_unitary(PauliLabel label, const PrimeModulus& d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> phases(d.value(), 0.0);
    for (std::size_t k = 1; k < phases.size(); ++k) {
        phases[k] = angle(rng);
        phases[0] -= phases[k];
    }
    return unitary_from_phases(label, d, phases);
}

} // namespace zdflow
