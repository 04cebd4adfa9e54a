#include "zdflow/gfp.hpp"

#include "zdflow/error.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace zdflow {

bool is_prime(Zd n) noexcept {
    if (n < 2) {
        return false;
    }
    for (Zd k = 2; static_cast<std::uint64_t>(k) * k <= n; ++k) {
        if (n % k == 0) {
            return false;
        }
    }
    return true;
}

PrimeModulus::PrimeModulus(Zd d, Zd limit) : d_(d) {
    if (!is_prime(d)) {
        throw Error(ErrorCode::NonPrimeModulus, "d = " + std::to_string(d) + " is not prime");
    }
    if (d > limit) {
        throw Error(ErrorCode::ModulusTooLarge,
                    "d = " + std::to_string(d) + " exceeds the configured limit " + std::to_string(limit));
    }
}

Zd PrimeModulus::reduce(std::int64_t x) const noexcept {
    const auto m = static_cast<std::int64_t>(d_);
    auto r = x % m;
    if (r < 0) {
        r += m;
    }
    return static_cast<Zd>(r);
}

Zd PrimeModulus::pow(Zd a, std::uint64_t e) const noexcept {
    Zd result = 1 % d_;
    Zd base = a % d_;
    while (e > 0) {
        if (e & 1U) {
            result = mul(result, base);
        }
        base = mul(base, base);
        e >>= 1U;
    }
    return result;
}

Zd PrimeModulus::inv(Zd a) const {
    a %= d_;
    if (a == 0) {
        throw Error(ErrorCode::ZeroInverse, "0 has no inverse mod " + std::to_string(d_));
    }
    // Fermat: a^(d-2) = a^-1.
    return pow(a, d_ - 2);
}

namespace {

void require_same_modulus(const PrimeModulus& a, const PrimeModulus& b) {
    if (!(a == b)) {
        throw Error(ErrorCode::DimensionMismatch, "operands live in different fields");
    }
}

} // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    require_same_modulus(a.modulus_, b.modulus_);
    return {a.modulus_, a.modulus_.add(a.value_, b.value_)};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    require_same_modulus(a.modulus_, b.modulus_);
    return {a.modulus_, a.modulus_.sub(a.value_, b.value_)};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    require_same_modulus(a.modulus_, b.modulus_);
    return {a.modulus_, a.modulus_.mul(a.value_, b.value_)};
}

FieldElement field_inv(const FieldElement& a) {
    return {a.modulus(), a.modulus().inv(a.value())};
}

FieldMatrix::FieldMatrix(PrimeModulus modulus, std::size_t rows, std::size_t cols)
    : modulus_(modulus), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FieldMatrix::FieldMatrix(PrimeModulus modulus, std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : modulus_(modulus), rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
        }
        for (const auto value : row) {
            data_.push_back(modulus_.reduce(value));
        }
    }
}

FieldMatrix FieldMatrix::identity(PrimeModulus modulus, std::size_t n) {
    FieldMatrix m(modulus, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, 1);
    }
    return m;
}

FieldMatrix FieldMatrix::from_column(PrimeModulus modulus, const FieldVector& column) {
    FieldMatrix m(modulus, column.size(), 1);
    for (std::size_t i = 0; i < column.size(); ++i) {
        m.set(i, 0, column[i]);
    }
    return m;
}

FieldVector FieldMatrix::column(std::size_t c) const {
    FieldVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

void FieldMatrix::set_column(std::size_t c, const FieldVector& values) {
    if (values.size() != rows_) {
        throw Error(ErrorCode::DimensionMismatch, "column length does not match row count");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        set(r, c, values[r]);
    }
}

FieldMatrix FieldMatrix::transpose() const {
    FieldMatrix t(modulus_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t.data_[c * rows_ + r] = (*this)(r, c);
        }
    }
    return t;
}

bool FieldMatrix::is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](Zd v) { return v == 0; });
}

bool FieldMatrix::is_symmetric() const noexcept {
    if (rows_ != cols_) {
        return false;
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = r + 1; c < cols_; ++c) {
            if ((*this)(r, c) != (*this)(c, r)) {
                return false;
            }
        }
    }
    return true;
}

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b) {
    require_same_modulus(a.modulus(), b.modulus());
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "mat_mul: " + std::to_string(a.rows()) + "x" +
                                                      std::to_string(a.cols()) + " times " +
                                                      std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    const auto& f = a.modulus();
    FieldMatrix out(f, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Zd aik = a(i, k);
            if (aik == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out.set(i, j, f.add(out(i, j), f.mul(aik, b(k, j))));
            }
        }
    }
    return out;
}

FieldVector mat_vec(const FieldMatrix& a, const FieldVector& x) {
    if (a.cols() != x.size()) {
        throw Error(ErrorCode::DimensionMismatch, "mat_vec: vector length does not match column count");
    }
    const auto& f = a.modulus();
    FieldVector out(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Zd acc = 0;
        for (std::size_t k = 0; k < a.cols(); ++k) {
            acc = f.add(acc, f.mul(a(i, k), x[k]));
        }
        out[i] = acc;
    }
    return out;
}

namespace {

/// Row-echelon workspace over an augmented block. Pivots are normalised to 1
/// so that back-substitution needs no division.
class EchelonWorkspace {
public:
    EchelonWorkspace(const FieldMatrix& a, const FieldMatrix* b, EliminationStats* stats)
        : f_(a.modulus()), rows_(a.rows()), left_(a.cols()), width_(a.cols() + (b ? b->cols() : 0)),
          data_(rows_ * width_, 0), stats_(stats) {
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < left_; ++c) {
                at(r, c) = a(r, c);
            }
            if (b != nullptr) {
                for (std::size_t c = 0; c < b->cols(); ++c) {
                    at(r, left_ + c) = (*b)(r, c);
                }
            }
        }
    }

    /// Forward elimination restricted to the left block; returns the rank.
    std::size_t reduce() {
        std::size_t pivot_row = 0;
        for (std::size_t col = 0; col < left_ && pivot_row < rows_; ++col) {
            std::size_t found = pivot_row;
            while (found < rows_ && at(found, col) == 0) {
                ++found;
            }
            if (found == rows_) {
                continue;
            }
            if (found != pivot_row) {
                for (std::size_t c = col; c < width_; ++c) {
                    std::swap(at(found, c), at(pivot_row, c));
                }
                count(width_ - col);
            }
            const Zd scale = f_.inv(at(pivot_row, col));
            if (scale != 1) {
                for (std::size_t c = col; c < width_; ++c) {
                    at(pivot_row, c) = f_.mul(at(pivot_row, c), scale);
                }
                count(width_ - col);
            }
            for (std::size_t r = pivot_row + 1; r < rows_; ++r) {
                const Zd factor = at(r, col);
                if (factor == 0) {
                    continue;
                }
                for (std::size_t c = col; c < width_; ++c) {
                    at(r, c) = f_.sub(at(r, c), f_.mul(factor, at(pivot_row, c)));
                }
                count(width_ - col);
            }
            pivots_.push_back(col);
            ++pivot_row;
        }
        return pivots_.size();
    }

    [[nodiscard]] SolveOutcome back_substitute(std::size_t rhs) {
        const std::size_t col = left_ + rhs;
        for (std::size_t r = pivots_.size(); r < rows_; ++r) {
            if (at(r, col) != 0) {
                return {};
            }
        }
        SolveOutcome out{true, FieldVector(left_, 0)};
        for (std::size_t i = pivots_.size(); i-- > 0;) {
            Zd acc = at(i, col);
            for (std::size_t j = i + 1; j < pivots_.size(); ++j) {
                const std::size_t pc = pivots_[j];
                acc = f_.sub(acc, f_.mul(at(i, pc), out.solution[pc]));
            }
            if (stats_ != nullptr) {
                stats_->field_operations += pivots_.size() - i;
            }
            out.solution[pivots_[i]] = acc;
        }
        return out;
    }

private:
    Zd& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }

    void count(std::size_t entries) {
        if (stats_ != nullptr) {
            ++stats_->row_operations;
            stats_->field_operations += entries;
        }
    }

    PrimeModulus f_;
    std::size_t rows_;
    std::size_t left_;
    std::size_t width_;
    std::vector<Zd> data_;
    std::vector<std::size_t> pivots_;
    EliminationStats* stats_;
};

} // namespace

std::vector<SolveOutcome> solve_all(const FieldMatrix& a, const FieldMatrix& b, EliminationStats* stats) {
    require_same_modulus(a.modulus(), b.modulus());
    if (a.rows() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "solve_all: A has " + std::to_string(a.rows()) +
                                                      " rows, B has " + std::to_string(b.rows()));
    }
    EchelonWorkspace ws(a, &b, stats);
    ws.reduce();
    std::vector<SolveOutcome> out;
    out.reserve(b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        out.push_back(ws.back_substitute(j));
    }
    if (stats != nullptr) {
        stats->systems += b.cols();
    }
    return out;
}

std::size_t rank(const FieldMatrix& a) {
    EchelonWorkspace ws(a, nullptr, nullptr);
    return ws.reduce();
}

} // namespace zdflow
