#pragma once

// Exact arithmetic and dense linear algebra over the prime field Z_d.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace zdflow {

/// Raw residue in [0, d).
using Zd = std::uint32_t;

inline constexpr Zd kDefaultModulusLimit = 97;

/// A prime modulus d, checked by trial division at construction.
class PrimeModulus {
public:
    explicit PrimeModulus(Zd d, Zd limit = kDefaultModulusLimit);

    [[nodiscard]] Zd value() const noexcept { return d_; }
    [[nodiscard]] bool is_odd() const noexcept { return d_ % 2 == 1; }

    [[nodiscard]] Zd reduce(std::int64_t x) const noexcept;
    [[nodiscard]] Zd add(Zd a, Zd b) const noexcept { return static_cast<Zd>((std::uint64_t{a} + b) % d_); }
    [[nodiscard]] Zd sub(Zd a, Zd b) const noexcept { return static_cast<Zd>((std::uint64_t{a} + d_ - b) % d_); }
    [[nodiscard]] Zd mul(Zd a, Zd b) const noexcept { return static_cast<Zd>((std::uint64_t{a} * b) % d_); }
    [[nodiscard]] Zd neg(Zd a) const noexcept { return a == 0 ? 0 : d_ - a; }
    [[nodiscard]] Zd pow(Zd a, std::uint64_t e) const noexcept;
    /// Throws Error(ZeroInverse) for a == 0.
    [[nodiscard]] Zd inv(Zd a) const;

    friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

private:
    Zd d_;
};

[[nodiscard]] bool is_prime(Zd n) noexcept;

class FieldElement {
public:
    FieldElement(PrimeModulus modulus, std::int64_t value) : modulus_(modulus), value_(modulus.reduce(value)) {}

    [[nodiscard]] Zd value() const noexcept { return value_; }
    [[nodiscard]] const PrimeModulus& modulus() const noexcept { return modulus_; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend bool operator==(const FieldElement&, const FieldElement&) = default;

private:
    PrimeModulus modulus_;
    Zd value_;
};

[[nodiscard]] FieldElement field_inv(const FieldElement& a);

using FieldVector = std::vector<Zd>;

/// Dense row-major matrix over Z_d.
class FieldMatrix {
public:
    FieldMatrix(PrimeModulus modulus, std::size_t rows, std::size_t cols);
    FieldMatrix(PrimeModulus modulus, std::initializer_list<std::initializer_list<std::int64_t>> rows);

    [[nodiscard]] static FieldMatrix identity(PrimeModulus modulus, std::size_t n);
    [[nodiscard]] static FieldMatrix from_column(PrimeModulus modulus, const FieldVector& column);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] const PrimeModulus& modulus() const noexcept { return modulus_; }

    [[nodiscard]] Zd operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::int64_t value) { data_[r * cols_ + c] = modulus_.reduce(value); }

    [[nodiscard]] FieldVector column(std::size_t c) const;
    void set_column(std::size_t c, const FieldVector& values);
    [[nodiscard]] FieldMatrix transpose() const;
    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] bool is_symmetric() const noexcept;

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    PrimeModulus modulus_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Zd> data_;
};

/// Throws Error(DimensionMismatch) when A.cols != B.rows or the moduli differ.
[[nodiscard]] FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b);
[[nodiscard]] FieldVector mat_vec(const FieldMatrix& a, const FieldVector& x);

/// Work counters for the elimination routines. `row_operations` counts row
/// swaps, scalings and eliminations; `field_operations` counts the scalar
/// multiply-adds those row operations and the back-substitutions perform.
struct EliminationStats {
    std::uint64_t row_operations = 0;
    std::uint64_t field_operations = 0;
    std::uint64_t systems = 0;

    EliminationStats& operator+=(const EliminationStats& other) noexcept {
        row_operations += other.row_operations;
        field_operations += other.field_operations;
        systems += other.systems;
        return *this;
    }
};

struct SolveOutcome {
    bool solvable = false;
    /// Free variables are set to 0. Empty when not solvable.
    FieldVector solution;
};

/// Solves A x = b for every column b of B with one echelon reduction of the
/// augmented block [A | B] followed by one back-substitution per column.
[[nodiscard]] std::vector<SolveOutcome> solve_all(const FieldMatrix& a, const FieldMatrix& b,
                                                  EliminationStats* stats = nullptr);

[[nodiscard]] std::size_t rank(const FieldMatrix& a);

} // namespace zdflow
