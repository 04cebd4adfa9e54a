#pragma once

#include "zdflow/gfp.hpp"

#include <compare>

namespace zdflow {

/// Exponents (a, b) of the Pauli X^a Z^b, phase dropped. As a vertex label it
/// names the measurement space M(a, b) and must be nonzero.
struct PauliLabel {
    Zd a = 0;
    Zd b = 0;

    [[nodiscard]] bool is_zero() const noexcept { return a == 0 && b == 0; }

    friend auto operator<=>(const PauliLabel&, const PauliLabel&) = default;
};

} // namespace zdflow
